#include "docwm/page_prep.hpp"

#include <algorithm>
#include <cmath>

namespace docwm {

Matrix sobel_magnitude(const PageImage& gray) {
  if (gray.channels != 1) raise(Errc::DimensionMismatch, "sobel expects gray input");
  const int w = gray.width, h = gray.height;
  if (w < 3 || h < 3) raise(Errc::PageTooSmall, "sobel needs at least 3x3");

  auto px = [&](int x, int y) -> int {
    x = std::clamp(x, 0, w - 1);  // edge replication
    y = std::clamp(y, 0, h - 1);
    return gray.at(x, y);
  };

  Matrix mag(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int gx = -px(x - 1, y - 1) + px(x + 1, y - 1)
               - 2 * px(x - 1, y) + 2 * px(x + 1, y)
               - px(x - 1, y + 1) + px(x + 1, y + 1);
      int gy = -px(x - 1, y - 1) - 2 * px(x, y - 1) - px(x + 1, y - 1)
               + px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1);
      mag.at(y, x) = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
    }
  }
  return mag;
}

Margins detect_margins(const Matrix& grad, double eps) {
  const int w = grad.cols, h = grad.rows;
  std::vector<char> col_hit(w, 0), row_hit(h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (grad.at(y, x) > eps) {
        col_hit[x] = 1;
        row_hit[y] = 1;
      }

  int left = 0;
  while (left < w && !col_hit[left]) ++left;
  if (left == w) raise(Errc::NoContent, "no gradient response above threshold");
  int right = w - 1;
  while (!col_hit[right]) --right;
  int top = 0;
  while (!row_hit[top]) ++top;
  int bottom = h - 1;
  while (!row_hit[bottom]) --bottom;

  return Margins{left, w - 1 - right, top, h - 1 - bottom};
}

PageImage crop(const PageImage& page, const Margins& m) {
  int w = page.width - m.left - m.right;
  int h = page.height - m.top - m.bottom;
  if (m.left < 0 || m.right < 0 || m.top < 0 || m.bottom < 0 || w < 1 || h < 1)
    raise(Errc::EmptyCrop, "margins leave no interior");
  PageImage out(w, h, page.channels);
  for (int y = 0; y < h; ++y) {
    auto* src = &page.pixels[((static_cast<std::size_t>(y) + m.top) * page.width + m.left) *
                             page.channels];
    auto* dst = &out.pixels[static_cast<std::size_t>(y) * w * page.channels];
    std::copy(src, src + static_cast<std::size_t>(w) * page.channels, dst);
  }
  return out;
}

PageImage resize_bilinear(const PageImage& page, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) raise(Errc::DimensionMismatch, "resize target must be positive");
  if (out_w == page.width && out_h == page.height) return page;

  PageImage out(out_w, out_h, page.channels);
  double sx = out_w > 1 ? static_cast<double>(page.width - 1) / (out_w - 1) : 0.0;
  double sy = out_h > 1 ? static_cast<double>(page.height - 1) / (out_h - 1) : 0.0;
  for (int y = 0; y < out_h; ++y) {
    double fy = y * sy;
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, page.height - 1);
    double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = x * sx;
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, page.width - 1);
      double wx = fx - x0;
      for (int c = 0; c < page.channels; ++c) {
        double v = (1 - wy) * ((1 - wx) * page.at(x0, y0, c) + wx * page.at(x1, y0, c)) +
                   wy * ((1 - wx) * page.at(x0, y1, c) + wx * page.at(x1, y1, c));
        out.at(x, y, c) = quantize_u8(v);
      }
    }
  }
  return out;
}

PageImage normalize_size(const PageImage& page, int canon_w, int canon_h, int block_side) {
  if (canon_w < block_side || canon_h < block_side || canon_w % block_side != 0 ||
      canon_h % block_side != 0)
    raise(Errc::InvalidCanonicalDims, std::to_string(canon_w) + "x" + std::to_string(canon_h) +
                                          " not a multiple of block side " +
                                          std::to_string(block_side));
  return resize_bilinear(page, canon_w, canon_h);
}

BlockGrid segment(const PageImage& page, int block_h, int block_w) {
  if (block_h < 1 || block_w < 1 || page.width % block_w != 0 || page.height % block_h != 0)
    raise(Errc::NonDivisibleDims, "page dims must be exact multiples of the block size");
  BlockGrid g;
  g.block_w = block_w;
  g.block_h = block_h;
  g.cols = page.width / block_w;
  g.rows = page.height / block_h;
  g.src_width = page.width;
  g.src_height = page.height;
  g.blocks.reserve(static_cast<std::size_t>(g.rows) * g.cols);
  for (int br = 0; br < g.rows; ++br) {
    for (int bc = 0; bc < g.cols; ++bc) {
      PageImage tile(block_w, block_h, page.channels);
      for (int y = 0; y < block_h; ++y) {
        auto* src = &page.pixels[((static_cast<std::size_t>(br) * block_h + y) * page.width +
                                  static_cast<std::size_t>(bc) * block_w) *
                                 page.channels];
        std::copy(src, src + static_cast<std::size_t>(block_w) * page.channels,
                  &tile.pixels[static_cast<std::size_t>(y) * block_w * page.channels]);
      }
      g.blocks.push_back(std::move(tile));
    }
  }
  return g;
}

PageImage reassemble(const BlockGrid& grid) {
  if (grid.rows < 1 || grid.cols < 1 ||
      grid.blocks.size() != static_cast<std::size_t>(grid.rows) * grid.cols ||
      grid.src_width != grid.cols * grid.block_w || grid.src_height != grid.rows * grid.block_h)
    raise(Errc::InconsistentGrid, "grid invariants violated");
  int channels = grid.blocks.front().channels;
  for (const auto& b : grid.blocks)
    if (b.width != grid.block_w || b.height != grid.block_h || b.channels != channels)
      raise(Errc::InconsistentGrid, "tile dimensions disagree with grid");

  PageImage out(grid.src_width, grid.src_height, channels);
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const PageImage& tile = grid.blocks[static_cast<std::size_t>(br) * grid.cols + bc];
      for (int y = 0; y < grid.block_h; ++y) {
        auto* src = &tile.pixels[static_cast<std::size_t>(y) * grid.block_w * channels];
        auto* dst = &out.pixels[((static_cast<std::size_t>(br) * grid.block_h + y) * out.width +
                                 static_cast<std::size_t>(bc) * grid.block_w) *
                                channels];
        std::copy(src, src + static_cast<std::size_t>(grid.block_w) * channels, dst);
      }
    }
  }
  return out;
}

}  // namespace docwm
