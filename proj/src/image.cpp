#include "docwm/image.hpp"

namespace docwm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptImage: return "CorruptImage";
    case Errc::NotSquare: return "NotSquare";
    case Errc::IoError: return "IoError";
    case Errc::PageTooSmall: return "PageTooSmall";
    case Errc::NoContent: return "NoContent";
    case Errc::EmptyCrop: return "EmptyCrop";
    case Errc::InvalidCanonicalDims: return "InvalidCanonicalDims";
    case Errc::NonDivisibleDims: return "NonDivisibleDims";
    case Errc::InconsistentGrid: return "InconsistentGrid";
    case Errc::NonDyadicDims: return "NonDyadicDims";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::PayloadMismatch: return "PayloadMismatch";
    case Errc::InsufficientAC: return "InsufficientAC";
    case Errc::NoTextureBlocks: return "NoTextureBlocks";
    case Errc::SideInfoMismatch: return "SideInfoMismatch";
    case Errc::ImageTooSmall: return "ImageTooSmall";
    case Errc::EmptyList: return "EmptyList";
    case Errc::InvalidCut: return "InvalidCut";
    case Errc::HeightMismatch: return "HeightMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::BoundUnsatisfiable: return "BoundUnsatisfiable";
    case Errc::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) raise(Errc::DimensionMismatch, "matmul");
  Matrix out(x.rows, y.cols, 0.0);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      double v = x.at(i, k);
      if (v == 0.0) continue;
      const double* yr = &y.a[static_cast<std::size_t>(k) * y.cols];
      double* or_ = &out.a[static_cast<std::size_t>(i) * out.cols];
      for (int j = 0; j < y.cols; ++j) or_[j] += v * yr[j];
    }
  }
  return out;
}

Matrix to_matrix(const PageImage& gray) {
  if (gray.channels != 1) raise(Errc::DimensionMismatch, "to_matrix expects gray input");
  Matrix m(gray.height, gray.width);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) m.a[i] = gray.pixels[i];
  return m;
}

PageImage to_page(const Matrix& m) {
  PageImage p(m.cols, m.rows, 1);
  for (std::size_t i = 0; i < m.a.size(); ++i) p.pixels[i] = quantize_u8(m.a[i]);
  return p;
}

PageImage to_luma(const PageImage& page) {
  if (page.channels == 1) return page;
  PageImage out(page.width, page.height, 1);
  const std::uint8_t* src = page.pixels.data();
  for (std::size_t i = 0; i < out.pixels.size(); ++i, src += 3) {
    double y = 0.299 * src[0] + 0.587 * src[1] + 0.114 * src[2];
    out.pixels[i] = quantize_u8(y);
  }
  return out;
}

Matrix watermark_matrix(const WatermarkBits& w, double amplitude) {
  Matrix m(w.side, w.side);
  for (std::size_t i = 0; i < w.bits.size(); ++i) m.a[i] = w.bits[i] ? amplitude : 0.0;
  return m;
}

}  // namespace docwm
