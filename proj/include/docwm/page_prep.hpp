#pragma once

#include <vector>

#include "docwm/image.hpp"

namespace docwm {

/// Distances from each page edge to the first content pixel.
struct Margins {
  int left = 0;
  int right = 0;
  int top = 0;
  int bottom = 0;
};

/// Cropped page partitioned into block_h x block_w tiles, row-major.
struct BlockGrid {
  int block_w = 0;  // tile width m
  int block_h = 0;  // tile height n
  int rows = 0;
  int cols = 0;
  int src_width = 0;   // cropped page width the grid was cut from
  int src_height = 0;
  std::vector<PageImage> blocks;

  int count() const { return rows * cols; }
};

/// Sobel gradient magnitude, edge-replicated borders, no thresholding.
Matrix sobel_magnitude(const PageImage& gray);

/// First row/column whose gradient magnitude exceeds eps, from each side.
Margins detect_margins(const Matrix& grad, double eps = 32.0);

PageImage crop(const PageImage& page, const Margins& m);

/// Bilinear resize with corner-aligned mapping src = dst*(S-1)/(D-1).
/// Identity when dimensions already match.
PageImage resize_bilinear(const PageImage& page, int out_w, int out_h);

/// resize_bilinear with the block-divisibility gate applied to the target.
PageImage normalize_size(const PageImage& page, int canon_w, int canon_h, int block_side);

BlockGrid segment(const PageImage& page, int block_h, int block_w);

PageImage reassemble(const BlockGrid& grid);

}  // namespace docwm
