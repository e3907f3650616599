#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "docwm/errors.hpp"

namespace docwm {

/// 8-bit raster page, row-major, 1 (gray) or 3 (RGB) interleaved channels.
struct PageImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  PageImage() = default;
  PageImage(int w, int h, int ch, std::uint8_t fill = 0)
      : width(w), height(h), channels(ch),
        pixels(static_cast<std::size_t>(w) * h * ch, fill) {
    if (w < 1 || h < 1 || (ch != 1 && ch != 3))
      raise(Errc::DimensionMismatch, "bad page dimensions " + std::to_string(w) + "x" +
                                         std::to_string(h) + "x" + std::to_string(ch));
  }

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_dims(const PageImage& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  bool operator==(const PageImage& o) const = default;
};

/// Binary watermark, side x side entries in {0,1}.
struct WatermarkBits {
  int side = 0;
  std::vector<std::uint8_t> bits;  // row-major, values 0 or 1

  WatermarkBits() = default;
  explicit WatermarkBits(int s) : side(s), bits(static_cast<std::size_t>(s) * s, 0) {}

  std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * side + x]; }
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * side + x]; }

  bool operator==(const WatermarkBits& o) const = default;
};

/// Dense real matrix used by the transform kernels. Row-major doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
  }
};

Matrix matmul(const Matrix& x, const Matrix& y);

/// round-half-away-from-zero, clamped to [0,255]
inline std::uint8_t quantize_u8(double v) {
  double r = (v >= 0.0) ? std::floor(v + 0.5) : std::ceil(v - 0.5);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

/// Gray page (or one tile of it) as a real matrix.
Matrix to_matrix(const PageImage& gray);
/// Quantize a real matrix back to an 8-bit gray page.
PageImage to_page(const Matrix& m);

/// Rec.601 luma; identity on gray input.
PageImage to_luma(const PageImage& page);

/// Watermark bits scaled to a {0, amplitude} image matrix.
Matrix watermark_matrix(const WatermarkBits& w, double amplitude);

struct DocumentManifest {
  std::string id;
  std::vector<std::string> pages;  // image file paths, unique, >= 1
  std::string language;
};

}  // namespace docwm
