#include "docwm/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace docwm {

double psnr(const PageImage& a, const PageImage& b) {
  if (!a.same_dims(b)) raise(Errc::DimensionMismatch, "psnr inputs differ in shape");
  double se = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    se += d * d;
  }
  double mse = se / static_cast<double>(a.pixels.size());
  if (mse == 0.0) return 100.0;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const PageImage& a_in, const PageImage& b_in) {
  if (a_in.width != b_in.width || a_in.height != b_in.height)
    raise(Errc::DimensionMismatch, "ssim inputs differ in shape");
  PageImage a = to_luma(a_in), b = to_luma(b_in);
  constexpr int win = 8;
  if (a.width < win || a.height < win) raise(Errc::ImageTooSmall, "ssim needs at least 8x8");
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  const int w = a.width, h = a.height;

  // Summed-area tables make the stride-1 sliding window O(1) per window.
  const int sw = w + 1;
  std::vector<double> sa(static_cast<std::size_t>(sw) * (h + 1), 0.0), sb = sa, saa = sa,
                      sbb = sa, sab = sa;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double pa = a.at(x, y), pb = b.at(x, y);
      std::size_t i = static_cast<std::size_t>(y + 1) * sw + (x + 1);
      std::size_t up = i - sw;
      sa[i] = pa + sa[i - 1] + sa[up] - sa[up - 1];
      sb[i] = pb + sb[i - 1] + sb[up] - sb[up - 1];
      saa[i] = pa * pa + saa[i - 1] + saa[up] - saa[up - 1];
      sbb[i] = pb * pb + sbb[i - 1] + sbb[up] - sbb[up - 1];
      sab[i] = pa * pb + sab[i - 1] + sab[up] - sab[up - 1];
    }
  }
  auto boxsum = [&](const std::vector<double>& t, int x, int y) {
    std::size_t i0 = static_cast<std::size_t>(y) * sw + x;
    std::size_t i1 = static_cast<std::size_t>(y + win) * sw + (x + win);
    return t[i1] - t[static_cast<std::size_t>(y) * sw + x + win] -
           t[static_cast<std::size_t>(y + win) * sw + x] + t[i0];
  };

  const double n = win * win;
  double acc = 0.0;
  std::size_t windows = 0;
  for (int y = 0; y + win <= h; ++y) {
    for (int x = 0; x + win <= w; ++x) {
      double ma = boxsum(sa, x, y) / n;
      double mb = boxsum(sb, x, y) / n;
      double va = boxsum(saa, x, y) / n - ma * ma;
      double vb = boxsum(sbb, x, y) / n - mb * mb;
      double cov = boxsum(sab, x, y) / n - ma * mb;
      double v = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
      acc += v;
      ++windows;
    }
  }
  return acc / static_cast<double>(windows);
}

double pearson(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    raise(Errc::DimensionMismatch, "pearson inputs differ in shape");
  double n = static_cast<double>(x.a.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    mx += x.a[i];
    my += y.a[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    double dx = x.a[i] - mx, dy = y.a[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

double nc_block(const WatermarkBits& w, const Matrix& recovered) {
  if (recovered.rows != w.side || recovered.cols != w.side)
    raise(Errc::DimensionMismatch, "recovered mark has wrong shape");
  Matrix wm(w.side, w.side);
  for (std::size_t i = 0; i < w.bits.size(); ++i) wm.a[i] = w.bits[i];
  double r = pearson(wm, recovered);
  if (std::isnan(r)) return 0.0;  // constant input on either side
  return std::max(0.0, r);
}

double nc_overall(const std::vector<double>& per_block) {
  if (per_block.empty()) raise(Errc::EmptyList, "nc_overall of empty list");
  std::vector<double> sorted = per_block;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::size_t take = (sorted.size() + 3) / 4;  // ceil(0.25*b)
  double acc = 0.0;
  for (std::size_t i = 0; i < take; ++i) acc += sorted[i];
  return acc / static_cast<double>(take);
}

}  // namespace docwm
