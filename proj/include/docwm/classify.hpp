#pragma once

#include <string>
#include <vector>

#include "docwm/image.hpp"
#include "docwm/page_prep.hpp"

namespace docwm {

enum class BlockClass { CW, CB, PT, CT, PTPG, CG };

const char* block_class_name(BlockClass c);
BlockClass block_class_from_name(const std::string& name);

inline bool is_texture(BlockClass c) {
  return c == BlockClass::CT || c == BlockClass::PTPG || c == BlockClass::CG;
}

/// Fractions of the maximum block energy B_max = 255. Must satisfy
/// 1 > g1 > g2 > g3 > g4 > 0.
struct EnergyThresholds {
  double g1 = 0.9;
  double g2 = 0.7;
  double g3 = 0.4;
  double g4 = 0.1;
  /// Ink-coverage bound separating sparse-text (PT) tiles inside the
  /// complete-text energy band.
  double pt_coverage = 0.02;

  void validate() const;
};

struct HistThresholds {
  double t1 = 12.0;
  double t2 = 3.0;
  double t3 = 0.5;
  double eps = 1e-8;
};

enum class HistClass { Text, Graphics, NonTexture };

/// RMS-normalized DC energy: DC of the orthonormal 2-D DCT divided by
/// sqrt(n*m), which equals the block mean. A constant block of value v
/// scores exactly v, so B_max = 255.
double block_energy(const PageImage& block);

/// Fraction of pixels darker than 128.
double ink_coverage(const PageImage& block);

BlockClass classify_energy(const PageImage& block, const EnergyThresholds& t = {});

HistClass classify_histogram(const PageImage& block, const HistThresholds& t = {});

struct BlockStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance
};

BlockStats block_stats(const PageImage& block);

/// Energy-classify every tile of a grid (luma conversion applied per tile).
std::vector<BlockClass> classify_grid(const BlockGrid& grid, const EnergyThresholds& t = {});

}  // namespace docwm
