#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "docwm/classify.hpp"
#include "docwm/image.hpp"
#include "docwm/metrics.hpp"
#include "docwm/page_prep.hpp"
#include "docwm/transforms.hpp"

namespace docwm {

enum class AlgoId {
  Dwt = 1,        // additive embedding in deep wavelet subbands
  Svd = 2,        // singular-value shifting of the whole block
  Dct = 3,        // multiplicative spread over large AC coefficients
  DwtSvd = 4,     // singular-value shifting per wavelet subband
  DwtDctSvd = 5,  // as DwtSvd with a DCT ahead of each subband SVD
};

AlgoId algo_from_int(int v);
inline int algo_block_side(AlgoId a) { return a == AlgoId::Dwt ? 256 : 128; }
const char* algo_name(AlgoId a);

/// Content-adaptive embedding strength per block class.
struct AlphaPolicy {
  double ct = 0.1;
  double ptpg = 0.2;
  double cg = 0.2;

  double alpha_for(BlockClass c) const {
    switch (c) {
      case BlockClass::CT: return ct;
      case BlockClass::PTPG: return ptpg;
      case BlockClass::CG: return cg;
      default: return 0.0;  // CW, CB, PT carry no watermark
    }
  }
};

struct AlgoParams {
  double mark_amplitude = 64.0;  // pixel value of a 1-bit in the mark image
  int dwt_levels = 3;
  WeightTable weights = weight_factors(3);
  int svd_rank = 32;          // shifted singular values, whole-block algorithm
  int dct_coeffs = 1024;      // embedded AC coefficients
  double dct_tolerance = 0.5; // relative binarization tolerance at extraction
  int subband_rank = 16;      // shifted singular values per subband
  int distortion_window = 3;  // N_x = N_y neighborhood for extraction weighting
};

/// Everything derived from the watermark that embedding/extraction reuses
/// across blocks: the mark as an image, its SVD, its one-level subbands
/// and their SVDs.
struct MarkData {
  int side = 0;
  Matrix img;
  SvdTriple msvd;
  Subbands sub;
  std::array<SvdTriple, 4> subsvd;  // LL, LH, HL, HH
};

MarkData prepare_mark(const WatermarkBits& w, const AlgoParams& p);

// ---- per-block payloads (original quantities extraction divides against) ----

struct PayloadDwt {
  Matrix ll, lh, hl, hh;  // deepest-level subbands of the original block
};
struct PayloadSvd {
  std::vector<double> s_c;  // full singular spectrum of the original block
};
struct PayloadDct {
  std::vector<int> positions;    // zig-zag indices of the embedded coefficients
  std::vector<double> values;    // their original values
};
struct PayloadSubbandSvd {
  std::array<std::vector<double>, 4> s_cl;  // per orientation LL, LH, HL, HH
};

struct BlockRecord {
  int index = 0;
  BlockClass cls = BlockClass::CW;
  double alpha = 0.0;
  std::optional<PayloadDwt> dwt;
  std::optional<PayloadSvd> svd;
  std::optional<PayloadDct> dct;
  std::optional<PayloadSubbandSvd> sub_svd;

  bool has_payload() const { return dwt || svd || dct || sub_svd; }
};

struct PageSideInfo {
  int page_index = 0;
  int orig_width = 0, orig_height = 0;
  Margins margins;
  int crop_width = 0, crop_height = 0;
  bool blank = false;  // page skipped (no content)
  // per-column/row mean luma of the canonical watermarked page; extraction
  // snaps its detected margins to the best profile match so small detection
  // drift on attacked pages does not shear the block grid
  std::vector<double> col_profile, row_profile;
  std::vector<BlockRecord> blocks;
};

struct SideInfo {
  AlgoId algo = AlgoId::Svd;
  int block_side = 128;
  int canon_w = 1280, canon_h = 1024;
  int mark_side = 32;
  double margin_eps = 32.0;
  bool auto_deskew = true;
  EnergyThresholds thresholds;
  AlphaPolicy policy;
  AlgoParams params;
  // mark-derived quantities shared by every block
  Matrix mark_u, mark_v;                    // whole-mark SVD (algo 2)
  std::vector<double> mark_s;               // whole-mark singular values
  std::array<Matrix, 4> mark_sub_u, mark_sub_v;  // per-subband SVDs (algos 4, 5)
  std::array<std::vector<double>, 4> mark_sub_s;
  std::vector<PageSideInfo> pages;
};

void save_sideinfo(const SideInfo& s, const std::string& path);
SideInfo load_sideinfo(const std::string& path);

// ---- block-level embed/extract ----
// Blocks are 8-bit gray tiles; embedders return the re-quantized tile.
// alpha = 0 embeds nothing and returns the input unchanged.

PageImage embed_dwt(const PageImage& block, const MarkData& mark, double alpha,
                    const AlgoParams& p, PayloadDwt& payload);
Matrix extract_dwt(const PageImage& suspect, const PayloadDwt& payload, double alpha,
                   const AlgoParams& p);

PageImage embed_svd_block(const PageImage& block, const MarkData& mark, double alpha,
                          const AlgoParams& p, PayloadSvd& payload);
Matrix extract_svd_block(const PageImage& suspect, const PayloadSvd& payload,
                         const Matrix& mark_u, const Matrix& mark_v,
                         const std::vector<double>& mark_s, double alpha,
                         const AlgoParams& p);

PageImage embed_dct(const PageImage& block, const WatermarkBits& w, double alpha,
                    const AlgoParams& p, PayloadDct& payload);
Matrix extract_dct(const PageImage& suspect, const PayloadDct& payload, double alpha,
                   const AlgoParams& p, int mark_side);

PageImage embed_subband_svd(const PageImage& block, const MarkData& mark, double alpha,
                            const AlgoParams& p, bool with_dct, PayloadSubbandSvd& payload);
Matrix extract_subband_svd(const PageImage& suspect, const PayloadSubbandSvd& payload,
                           const std::array<Matrix, 4>& mark_sub_u,
                           const std::array<Matrix, 4>& mark_sub_v,
                           const std::array<std::vector<double>, 4>& mark_sub_s, double alpha,
                           const AlgoParams& p, bool with_dct, int mark_side);

// ---- document pipeline ----

struct PipelineConfig {
  AlgoId algo = AlgoId::Svd;
  int canon_w = 1280;
  int canon_h = 1024;
  double margin_eps = 32.0;
  bool auto_deskew = true;  // extraction deskews the suspect before cropping
  EnergyThresholds thresholds;
  AlphaPolicy policy;
  AlgoParams params;

  int block_side() const { return algo_block_side(algo); }
  void validate() const;
};

struct EmbedResult {
  std::vector<PageImage> pages;
  SideInfo side;
  int texture_blocks = 0;
};

EmbedResult embed_document(const std::vector<PageImage>& pages, const WatermarkBits& w,
                           const PipelineConfig& cfg);

struct ExtractedMark {
  int page_index = 0;
  int block_index = 0;
  Matrix recovered;  // real-valued side x side estimate
};

struct ExtractResult {
  std::vector<ExtractedMark> marks;
  NcReport report;
  std::vector<BlockClass> suspect_classes;  // re-classification of the suspect, all pages
};

ExtractResult extract_document(const std::vector<PageImage>& suspect_pages, const SideInfo& side,
                               const WatermarkBits& w);

/// Margin detection + profile-based refinement + crop + resize to the
/// canonical dims, as used by the extraction pipeline. Throws NoContent on
/// blank pages.
PageImage locate_canonical_page(const PageImage& page, const SideInfo& side, int page_index);

}  // namespace docwm
