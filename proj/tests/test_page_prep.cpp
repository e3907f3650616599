#include <doctest.h>

#include <cmath>

#include "docwm/page_prep.hpp"
#include "docwm/rng.hpp"

using namespace docwm;

namespace {

PageImage random_gray(int w, int h, Rng& rng) {
  PageImage p(w, h, 1);
  for (auto& px : p.pixels) px = static_cast<std::uint8_t>(rng.below(256));
  return p;
}

}  // namespace

TEST_CASE("sobel of a constant page is zero everywhere") {
  PageImage p(16, 12, 1, 137);
  Matrix m = sobel_magnitude(p);
  for (double v : m.a) CHECK(v == 0.0);
}

TEST_CASE("sobel step response is 4*255 on the edge columns") {
  // columns 0..3 black, 4..7 white: the two columns adjacent to the step
  // see |Gx| = 4*255, one pixel on each side
  PageImage p(8, 8, 1, 0);
  for (int y = 0; y < 8; ++y)
    for (int x = 4; x < 8; ++x) p.at(x, y) = 255;
  Matrix m = sobel_magnitude(p);
  for (int y = 1; y < 7; ++y) {
    CHECK(m.at(y, 3) == doctest::Approx(1020.0));
    CHECK(m.at(y, 4) == doctest::Approx(1020.0));
    CHECK(m.at(y, 1) == doctest::Approx(0.0));
    CHECK(m.at(y, 6) == doctest::Approx(0.0));
  }
}

TEST_CASE("sobel magnitude is invariant under intensity inversion") {
  Rng rng(5);
  PageImage p = random_gray(24, 16, rng);
  PageImage inv = p;
  for (auto& px : inv.pixels) px = static_cast<std::uint8_t>(255 - px);
  Matrix a = sobel_magnitude(p), b = sobel_magnitude(inv);
  for (std::size_t i = 0; i < a.a.size(); ++i) CHECK(a.a[i] == doctest::Approx(b.a[i]));
}

TEST_CASE("sobel rejects tiny pages") {
  CHECK_THROWS_WITH_AS(sobel_magnitude(PageImage(2, 2, 1)), doctest::Contains("PageTooSmall"),
                       Error);
}

TEST_CASE("margins of an inset rectangle") {
  // black rectangle inset 50 px on every side of a 200x160 white page;
  // the gradient responds one pixel before the ink edge
  PageImage p(200, 160, 1, 255);
  for (int y = 50; y < 110; ++y)
    for (int x = 50; x < 150; ++x) p.at(x, y) = 0;
  Margins m = detect_margins(sobel_magnitude(p), 32.0);
  CHECK(m.left >= 49);
  CHECK(m.left <= 51);
  CHECK(m.right >= 49);
  CHECK(m.right <= 51);
  CHECK(m.top >= 49);
  CHECK(m.top <= 51);
  CHECK(m.bottom >= 49);
  CHECK(m.bottom <= 51);
}

TEST_CASE("blank page has no margins to detect") {
  PageImage p(32, 32, 1, 255);
  CHECK_THROWS_WITH_AS(detect_margins(sobel_magnitude(p), 32.0), doctest::Contains("NoContent"),
                       Error);
}

TEST_CASE("content touching all edges gives zero margins") {
  Rng rng(6);
  PageImage p = random_gray(40, 40, rng);  // noise everywhere, gradients at borders
  Margins m = detect_margins(sobel_magnitude(p), 32.0);
  CHECK(m.left == 0);
  CHECK(m.right == 0);
  CHECK(m.top == 0);
  CHECK(m.bottom == 0);
}

TEST_CASE("crop arithmetic") {
  Rng rng(7);
  PageImage p = random_gray(100, 100, rng);
  CHECK(crop(p, Margins{0, 0, 0, 0}) == p);

  PageImage c = crop(p, Margins{10, 10, 10, 10});
  CHECK(c.width == 80);
  CHECK(c.height == 80);
  CHECK(c.at(0, 0) == p.at(10, 10));
  CHECK(c.at(79, 79) == p.at(89, 89));

  CHECK_THROWS_WITH_AS(crop(p, Margins{60, 60, 0, 0}), doctest::Contains("EmptyCrop"), Error);
}

TEST_CASE("bilinear upsample of a 2x2 checkerboard") {
  PageImage p(2, 2, 1);
  p.at(0, 0) = 0;
  p.at(1, 0) = 255;
  p.at(0, 1) = 255;
  p.at(1, 1) = 0;
  PageImage r = resize_bilinear(p, 4, 4);
  // corner-aligned: sample positions 0, 1/3, 2/3, 1 in source space
  const int want[4][4] = {{0, 85, 170, 255},
                          {85, 113, 142, 170},
                          {170, 142, 113, 85},
                          {255, 170, 85, 0}};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) CHECK(static_cast<int>(r.at(x, y)) == want[y][x]);
}

TEST_CASE("normalize_size is the identity on matching dims") {
  Rng rng(8);
  PageImage p = random_gray(256, 128, rng);
  CHECK(normalize_size(p, 256, 128, 128) == p);
  CHECK_THROWS_WITH_AS(normalize_size(p, 100, 100, 256),
                       doctest::Contains("InvalidCanonicalDims"), Error);
}

TEST_CASE("segment/reassemble partition identity") {
  Rng rng(9);
  PageImage p = random_gray(512, 512, rng);
  BlockGrid g = segment(p, 256, 256);
  CHECK(g.count() == 4);
  CHECK(reassemble(g) == p);

  // single-block grid
  BlockGrid one = segment(p, 512, 512);
  CHECK(one.count() == 1);
  CHECK(reassemble(one) == p);

  // non-square tiling on a non-square page
  PageImage q = random_gray(96, 64, rng);
  BlockGrid g2 = segment(q, 32, 48);
  CHECK(g2.rows == 2);
  CHECK(g2.cols == 2);
  CHECK(reassemble(g2) == q);

  CHECK_THROWS_WITH_AS(segment(PageImage(300, 300, 1), 256, 256),
                       doctest::Contains("NonDivisibleDims"), Error);
}

TEST_CASE("reassemble rejects inconsistent grids") {
  Rng rng(10);
  PageImage p = random_gray(64, 64, rng);
  BlockGrid g = segment(p, 32, 32);
  g.blocks.pop_back();
  CHECK_THROWS_WITH_AS(reassemble(g), doctest::Contains("InconsistentGrid"), Error);
}
