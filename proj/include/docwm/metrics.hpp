#pragma once

#include <vector>

#include "docwm/image.hpp"

namespace docwm {

/// 10*log10(255^2/MSE) over all samples; capped at 100 dB when MSE = 0.
double psnr(const PageImage& a, const PageImage& b);

/// Mean SSIM over 8x8 sliding windows (stride 1), C1=(0.01*255)^2,
/// C2=(0.03*255)^2. RGB inputs are compared on luma.
double ssim(const PageImage& a, const PageImage& b);

/// Mean-removed Pearson correlation of the binary mark against a recovered
/// real-valued mark, clamped to [0,1]. Zero variance on either side -> 0.
double nc_block(const WatermarkBits& w, const Matrix& recovered);

/// Pearson correlation between two real matrices (unclamped).
double pearson(const Matrix& x, const Matrix& y);

/// Average of the top ceil(0.25*b) per-block values.
double nc_overall(const std::vector<double>& per_block);

struct NcReport {
  std::vector<double> nc_blocks;
  double overall = 0.0;
  int texture_blocks = 0;
};

}  // namespace docwm
