#include <doctest.h>

#include <cmath>

#include "docwm/metrics.hpp"
#include "docwm/rng.hpp"

using namespace docwm;

TEST_CASE("psnr basics") {
  PageImage a(16, 16, 1, 100);
  CHECK(psnr(a, a) == doctest::Approx(100.0));

  PageImage black(16, 16, 1, 0), white(16, 16, 1, 255);
  CHECK(psnr(black, white) == doctest::Approx(0.0));

  PageImage c(16, 16, 1, 0);
  PageImage d = c;
  d.pixels[0] = 255;  // single differing pixel, delta 255, 256 samples
  CHECK(psnr(c, d) == doctest::Approx(10.0 * std::log10(256.0)));  // 24.082 dB

  CHECK_THROWS_WITH_AS(psnr(a, PageImage(8, 8, 1)), doctest::Contains("DimensionMismatch"),
                       Error);
}

TEST_CASE("psnr symmetry and monotonicity in MSE") {
  Rng rng(31);
  PageImage a(32, 32, 1);
  for (auto& px : a.pixels) px = static_cast<std::uint8_t>(rng.below(256));
  PageImage small_err = a, big_err = a;
  for (std::size_t i = 0; i < a.pixels.size(); i += 7)
    small_err.pixels[i] = static_cast<std::uint8_t>(std::min(255, small_err.pixels[i] + 3));
  for (std::size_t i = 0; i < a.pixels.size(); i += 3)
    big_err.pixels[i] = static_cast<std::uint8_t>(std::min(255, big_err.pixels[i] + 21));
  CHECK(psnr(a, small_err) == doctest::Approx(psnr(small_err, a)));
  CHECK(psnr(a, small_err) > psnr(a, big_err));
}

TEST_CASE("ssim of identical images is exactly one") {
  Rng rng(32);
  PageImage a(24, 24, 1);
  for (auto& px : a.pixels) px = static_cast<std::uint8_t>(rng.below(256));
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim single-window constant offset matches the closed form") {
  // 8x8 images -> exactly one window; variances 0
  PageImage a(8, 8, 1, 100), b(8, 8, 1, 110);
  double c1 = 6.5025;
  double want = (2.0 * 100 * 110 + c1) / (100.0 * 100 + 110.0 * 110 + c1);
  CHECK(ssim(a, b) == doctest::Approx(want).epsilon(1e-12));
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)));
}

TEST_CASE("ssim of independent noise is near zero") {
  Rng rng(33);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PageImage a(32, 32, 1), b(32, 32, 1);
    for (auto& px : a.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    for (auto& px : b.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    worst = std::max(worst, std::abs(ssim(a, b)));
  }
  CHECK(worst < 0.1);
}

TEST_CASE("ssim rejects tiny images") {
  CHECK_THROWS_WITH_AS(ssim(PageImage(4, 4, 1), PageImage(4, 4, 1)),
                       doctest::Contains("ImageTooSmall"), Error);
}

namespace {

// brute-force oracle: plain Pearson over all entries
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("nc_block matches the Pearson oracle and clamps at zero") {
  WatermarkBits w(32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) w.at(x, y) = static_cast<std::uint8_t>((x + y) % 2);

  Matrix same(32, 32);
  for (std::size_t i = 0; i < w.bits.size(); ++i) same.a[i] = w.bits[i];
  CHECK(nc_block(w, same) == doctest::Approx(1.0));

  Matrix comp(32, 32);
  for (std::size_t i = 0; i < w.bits.size(); ++i) comp.a[i] = 1.0 - w.bits[i];
  CHECK(nc_block(w, comp) == doctest::Approx(0.0));  // raw r = -1, clamped

  // invert the (even,even) quarter; frozen value 1/sqrt(3) from the
  // two-by-two cell pattern, cross-checked against the oracle
  Matrix quarter = same;
  for (int y = 0; y < 32; y += 2)
    for (int x = 0; x < 32; x += 2) quarter.at(y, x) = 1.0 - quarter.at(y, x);
  std::vector<double> wx(w.bits.begin(), w.bits.end());
  double oracle = pearson_oracle(wx, quarter.a);
  CHECK(nc_block(w, quarter) == doctest::Approx(std::max(0.0, oracle)));
  CHECK(nc_block(w, quarter) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("nc_block is invariant under offset and positive scale") {
  Rng rng(34);
  WatermarkBits w(16);
  for (auto& b : w.bits) b = static_cast<std::uint8_t>(rng.below(2));
  Matrix rec(16, 16);
  for (auto& v : rec.a) v = rng.uniform(-1, 1);
  double base = nc_block(w, rec);
  Matrix shifted = rec;
  for (auto& v : shifted.a) v = 3.7 * v + 42.0;
  CHECK(nc_block(w, shifted) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("nc_block of constant input is zero") {
  WatermarkBits w(8);
  for (int i = 0; i < 32; ++i) w.bits[i] = 1;
  CHECK(nc_block(w, Matrix(8, 8, 5.0)) == 0.0);

  WatermarkBits flat(8);  // constant mark side
  Matrix rec(8, 8);
  for (std::size_t i = 0; i < rec.a.size(); ++i) rec.a[i] = static_cast<double>(i % 3);
  CHECK(nc_block(flat, rec) == 0.0);
}

TEST_CASE("nc_overall averages the top quarter") {
  CHECK(nc_overall({1.0, 0.9, 0.2, 0.1}) == doctest::Approx(1.0));  // ceil(1) of 4
  CHECK(nc_overall({0.7}) == doctest::Approx(0.7));
  CHECK(nc_overall(std::vector<double>(8, 0.5)) == doctest::Approx(0.5));
  // 5 values -> ceil(1.25) = 2 taken
  CHECK(nc_overall({0.1, 0.2, 0.3, 0.4, 1.0}) == doctest::Approx(0.7));
  CHECK_THROWS_WITH_AS(nc_overall({}), doctest::Contains("EmptyList"), Error);
}

TEST_CASE("nc_overall is permutation invariant and monotone") {
  std::vector<double> v{0.9, 0.1, 0.5, 0.7, 0.3, 0.8};
  std::vector<double> shuffled{0.3, 0.8, 0.9, 0.5, 0.1, 0.7};
  CHECK(nc_overall(v) == doctest::Approx(nc_overall(shuffled)));
  std::vector<double> raised = v;
  raised[1] = 0.95;
  CHECK(nc_overall(raised) >= nc_overall(v));
}
