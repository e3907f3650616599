#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "docwm/classify.hpp"
#include "docwm/corpus.hpp"
#include "docwm/image_io.hpp"
#include "docwm/page_prep.hpp"

using namespace docwm;
namespace fs = std::filesystem;

namespace {

std::vector<BlockClass> classify_page(const PageImage& page, int canon_w, int canon_h,
                                      int side) {
  PageImage luma = to_luma(page);
  Margins m = detect_margins(sobel_magnitude(luma), 32.0);
  PageImage canon = normalize_size(crop(luma, m), canon_w, canon_h, side);
  return classify_grid(segment(canon, side, side));
}

}  // namespace

TEST_CASE("generated pages crop to exactly the canonical dims") {
  for (auto layout : {"text", "mixed", "figures"}) {
    CorpusConfig cc;
    cc.canon_w = 768;
    cc.canon_h = 512;
    cc.layout = layout;
    cc.seed = 5;
    PageImage page = generate_page(cc, 0, 0);
    PageImage luma = to_luma(page);
    Margins m = detect_margins(sobel_magnitude(luma), 32.0);
    PageImage cropped = crop(luma, m);
    CHECK(cropped.width == 768);
    CHECK(cropped.height == 512);
    CHECK(m.left >= 40);
    CHECK(m.left <= 80);
    CHECK(m.top >= 40);
    CHECK(m.top <= 80);
  }
}

TEST_CASE("text layout is dominated by text-band blocks") {
  CorpusConfig cc;
  cc.canon_w = 1024;
  cc.canon_h = 768;
  cc.layout = "text";
  cc.seed = 6;
  auto classes = classify_page(generate_page(cc, 0, 0), 1024, 768, 128);
  int ct_pt = 0;
  for (auto c : classes)
    if (c == BlockClass::CT || c == BlockClass::PT) ++ct_pt;
  CHECK(ct_pt * 100 >= 60 * static_cast<int>(classes.size()));
}

TEST_CASE("figure-heavy layout produces graphics blocks") {
  CorpusConfig cc;
  cc.canon_w = 1024;
  cc.canon_h = 768;
  cc.layout = "figures";
  cc.seed = 7;
  auto classes = classify_page(generate_page(cc, 0, 0), 1024, 768, 128);
  int gfx = 0;
  for (auto c : classes)
    if (c == BlockClass::CG || c == BlockClass::PTPG) ++gfx;
  CHECK(gfx * 100 >= 10 * static_cast<int>(classes.size()));
}

TEST_CASE("generation is deterministic per seed") {
  CorpusConfig cc;
  cc.canon_w = 512;
  cc.canon_h = 256;
  cc.seed = 8;
  CHECK(generate_page(cc, 1, 0) == generate_page(cc, 1, 0));
  CHECK(generate_page(cc, 1, 0) != generate_page(cc, 2, 0));
  CorpusConfig other = cc;
  other.seed = 9;
  CHECK(generate_page(cc, 1, 0) != generate_page(other, 1, 0));
}

TEST_CASE("corpus writing produces loadable manifests") {
  CorpusConfig cc;
  cc.documents = 2;
  cc.pages_per_doc = 2;
  cc.canon_w = 512;
  cc.canon_h = 256;
  cc.seed = 10;
  fs::path dir = fs::temp_directory_path() / ("docwm_corpus_" + std::to_string(::getpid()));
  auto manifests = generate_corpus(cc, dir.string());
  REQUIRE(manifests.size() == 2);
  for (const auto& m : manifests) {
    DocumentManifest loaded = load_manifest((dir / (m.id + ".json")).string());
    CHECK(loaded.pages.size() == 2);
    for (const auto& p : loaded.pages) CHECK(load_page(p).width > 0);
  }
  CHECK(load_watermark((dir / "watermark.png").string()).side == 32);
  fs::remove_all(dir);
}

TEST_CASE("default watermark is balanced and fixed") {
  WatermarkBits w = make_default_watermark();
  REQUIRE(w.side == 32);
  int ones = 0;
  for (auto b : w.bits) ones += b;
  CHECK(ones == 512);
  CHECK(w == make_default_watermark());
}
