#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "docwm/image.hpp"
#include "docwm/page_prep.hpp"

namespace docwm {

/// Baseline JPEG encode at quality q, then decode. Dims preserved.
PageImage jpeg_compress(const PageImage& page, int quality);

/// Additive N(0, sigma) per sample, rounded and clamped. sigma is the
/// standard deviation of the added noise; deterministic per seed.
PageImage add_gaussian_noise(const PageImage& page, double sigma, std::uint64_t seed);

/// Rotation about the page center, bilinear resampling, white fill,
/// output dims preserved.
PageImage rotate(const PageImage& page, double degrees);

/// Bilinear scale by independent axis factors.
PageImage scale(const PageImage& page, double fx, double fy);

/// Projection-profile skew estimate: searches [-10, +10] degrees at 0.05
/// degree resolution for the angle maximizing row-projection variance.
double detect_skew(const PageImage& page);

/// rotate(page, -detect_skew(page))
PageImage correct_skew(const PageImage& page);

enum class ScreenQuality { Low, Normal, Good };

ScreenQuality screen_quality_from_name(const std::string& name);

/// Screen-capture surrogate: axis scaling (0.8x / 1.1x / 1.25x), JPEG
/// re-encode (Q 40/70/90) and a small seeded rotation within +/-0.3 deg.
PageImage print_screen_sim(const PageImage& page, ScreenQuality q, std::uint64_t seed);

/// Cut the page at the given columns and re-composite with the
/// inter-segment gap changed by gap_delta and seeded vertical shifts of
/// up to 3 px. Output is padded/cropped back to the input dims.
PageImage stitch_columns(const PageImage& page, const std::vector<int>& cut_columns,
                         int gap_delta, std::uint64_t seed);

/// Shrink both pages to half width and place them side by side.
PageImage stitch_pages(const PageImage& a, const PageImage& b);

enum class EditKind { StrikeThrough, Highlight, WordSwap };

EditKind edit_kind_from_name(const std::string& name);

/// Pixel-level text alteration of the selected blocks. The grid gives the
/// block geometry; margins place it on the page.
PageImage block_edit(const PageImage& page, const Margins& m, const BlockGrid& grid,
                     const std::vector<int>& indices, EditKind kind, std::uint64_t seed);

/// One attack of the battery as a serializable description.
struct AttackSpec {
  std::string kind;  // jpeg | noise | rotate | scale | crop | printscreen |
                     // stitch_columns | stitch_pages | block_edit
  double q = 75.0;
  double sigma = 1.0;
  double degrees = 0.0;
  double fx = 1.0, fy = 1.0;
  int crop_x = 0, crop_y = 0, crop_w = 0, crop_h = 0;
  std::string quality = "normal";
  std::vector<int> cuts;
  int gap_delta = 0;
  std::vector<int> indices;
  std::string edit = "strike";
  std::uint64_t seed = 0;
};

AttackSpec attack_spec_from_json(const std::string& text);
std::string attack_spec_to_json(const AttackSpec& spec);

/// Apply a single-page attack. stitch_pages needs two pages and is
/// dispatched by the caller.
PageImage apply_attack(const PageImage& page, const AttackSpec& spec);

}  // namespace docwm
