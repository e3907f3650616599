#include <doctest.h>

#include "docwm/classify.hpp"
#include "docwm/corpus.hpp"
#include "docwm/page_prep.hpp"
#include "docwm/rng.hpp"

using namespace docwm;

TEST_CASE("block energy equals the mean intensity") {
  CHECK(block_energy(PageImage(8, 8, 1, 255)) == doctest::Approx(255.0));
  CHECK(block_energy(PageImage(8, 8, 1, 0)) == doctest::Approx(0.0));
  for (int v : {1, 17, 128, 254})
    for (int side : {4, 16, 64})
      CHECK(block_energy(PageImage(side, side, 1, static_cast<std::uint8_t>(v))) ==
            doctest::Approx(static_cast<double>(v)));

  PageImage half(8, 8, 1, 0);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 8; ++x) half.at(x, y) = 255;
  CHECK(block_energy(half) == doctest::Approx(127.5));
}

TEST_CASE("energy bands map to the six classes") {
  EnergyThresholds t;
  // T1..T4 = 229.5, 178.5, 102, 25.5
  CHECK(classify_energy(PageImage(16, 16, 1, 255), t) == BlockClass::CW);
  CHECK(classify_energy(PageImage(16, 16, 1, 231), t) == BlockClass::CW);
  CHECK(classify_energy(PageImage(16, 16, 1, 0), t) == BlockClass::CB);
  CHECK(classify_energy(PageImage(16, 16, 1, 20), t) == BlockClass::CB);
  // constant 200 sits in the text band; no dark pixels -> sparse-text PT
  CHECK(classify_energy(PageImage(16, 16, 1, 200), t) == BlockClass::PT);
  CHECK(classify_energy(PageImage(16, 16, 1, 150), t) == BlockClass::PTPG);
  CHECK(classify_energy(PageImage(16, 16, 1, 60), t) == BlockClass::CG);
}

TEST_CASE("dense text classifies CT, sparse text over wash classifies PT") {
  Rng rng(21);
  PageImage dense = make_labeled_tile(BlockClass::CT, 128, rng);
  CHECK(classify_energy(dense) == BlockClass::CT);
  CHECK(ink_coverage(dense) >= 0.02);

  PageImage sparse = make_labeled_tile(BlockClass::PT, 128, rng);
  CHECK(classify_energy(sparse) == BlockClass::PT);
  CHECK(ink_coverage(sparse) < 0.02);
}

TEST_CASE("classification is total and deterministic") {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    PageImage tile(32, 32, 1);
    for (auto& px : tile.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    BlockClass a = classify_energy(tile);
    BlockClass b = classify_energy(tile);
    CHECK(a == b);
    CHECK((a == BlockClass::CW || a == BlockClass::CB || a == BlockClass::PT ||
           a == BlockClass::CT || a == BlockClass::PTPG || a == BlockClass::CG));
  }
}

TEST_CASE("darkening never moves a block toward CW") {
  auto rank = [](BlockClass c) {
    switch (c) {
      case BlockClass::CW: return 5;
      case BlockClass::PT:
      case BlockClass::CT: return 4;  // same energy band
      case BlockClass::PTPG: return 3;
      case BlockClass::CG: return 2;
      case BlockClass::CB: return 1;
    }
    return 0;
  };
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    PageImage tile(16, 16, 1);
    for (auto& px : tile.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    PageImage darker = tile;
    int drop = 1 + static_cast<int>(rng.below(80));
    for (auto& px : darker.pixels)
      px = static_cast<std::uint8_t>(std::max(0, static_cast<int>(px) - drop));
    CHECK(rank(classify_energy(darker)) <= rank(classify_energy(tile)));
  }
}

TEST_CASE("classification survives segment/reassemble round trips") {
  Rng rng(24);
  PageImage page(256, 256, 1);
  for (auto& px : page.pixels) px = static_cast<std::uint8_t>(rng.below(256));
  BlockGrid g = segment(page, 128, 128);
  auto before = classify_grid(g);
  BlockGrid g2 = segment(reassemble(g), 128, 128);
  CHECK(classify_grid(g2) == before);
}

TEST_CASE("histogram classifier follows the L1/L2 statistic") {
  HistThresholds t;
  // single intensity: s ~= 1 lands in the text band as the formula reads
  CHECK(classify_histogram(PageImage(16, 16, 1, 255), t) == HistClass::Text);

  // two spikes of 192/64 pixels: s = (a+b)/sqrt(a^2+b^2)
  PageImage two(16, 16, 1, 255);
  for (int i = 0; i < 64; ++i) two.pixels[i] = 0;
  // s = 256/sqrt(192^2+64^2) = 1.2649 -> text band
  CHECK(classify_histogram(two, t) == HistClass::Text);

  // uniform 256-level histogram: s = sqrt(256) = 16 > 12 -> non-texture
  PageImage uni(16, 16, 1);
  for (int i = 0; i < 256; ++i) uni.pixels[i] = static_cast<std::uint8_t>(i);
  CHECK(classify_histogram(uni, t) == HistClass::NonTexture);

  // ~32 distinct levels: s ~= sqrt(32) = 5.66 -> graphics band
  PageImage gfx(16, 16, 1);
  for (int i = 0; i < 256; ++i) gfx.pixels[i] = static_cast<std::uint8_t>((i % 32) * 8);
  CHECK(classify_histogram(gfx, t) == HistClass::Graphics);
}

TEST_CASE("block stats") {
  BlockStats s = block_stats(PageImage(8, 8, 1, 7));
  CHECK(s.mean == doctest::Approx(7.0));
  CHECK(s.variance == doctest::Approx(0.0));

  PageImage half(8, 8, 1, 0);
  for (int i = 0; i < 32; ++i) half.pixels[i] = 255;
  s = block_stats(half);
  CHECK(s.mean == doctest::Approx(127.5));
  CHECK(s.variance == doctest::Approx(16256.25));
}

TEST_CASE("labeled synthetic tiles agree with their target class") {
  // the acceptance suite runs the full 200-per-class sweep; this is a smoke
  // check that each generator hits its band at a couple of sizes
  Rng rng(25);
  for (int side : {128, 256}) {
    for (BlockClass target : {BlockClass::CW, BlockClass::CB, BlockClass::PT, BlockClass::CT,
                              BlockClass::PTPG, BlockClass::CG}) {
      int hits = 0;
      for (int i = 0; i < 20; ++i)
        if (classify_energy(make_labeled_tile(target, side, rng)) == target) ++hits;
      CHECK(hits >= 19);
    }
  }
}

TEST_CASE("threshold validation") {
  EnergyThresholds bad;
  bad.g2 = 0.95;
  CHECK_THROWS_AS(classify_energy(PageImage(4, 4, 1, 0), bad), Error);
}
