#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "docwm/classify.hpp"
#include "docwm/image.hpp"
#include "docwm/rng.hpp"

namespace docwm {

/// Recipe for deterministic synthetic document pages. Pages are generated
/// so that margin detection recovers exactly canon_w x canon_h: the content
/// area carries a thin frame whose gradient response pins the crop.
struct CorpusConfig {
  int documents = 2;
  int pages_per_doc = 1;
  int canon_w = 1024;
  int canon_h = 768;
  std::string layout = "mixed";    // text | mixed | figures | report
  std::string language = "latin";  // latin | cjk | indic (glyph shape/density)
  double type_scale = 2.0;         // glyph metrics multiplier (~rasterization DPI)
  bool tinted = true;              // light-gray paper instead of pure white
  bool rgb = false;                // emit color pages (tinted paper)
  std::uint64_t seed = 1;
};

/// Deterministic page for (doc, page) under the given recipe.
PageImage generate_page(const CorpusConfig& cfg, int doc_index, int page_index);

/// Write pages and one manifest per document under outdir; returns the
/// manifests in document order. Also writes watermark.png (the default mark).
std::vector<DocumentManifest> generate_corpus(const CorpusConfig& cfg,
                                              const std::string& outdir);

/// Balanced pseudo-random 32x32 mark used by tests and as CLI default.
WatermarkBits make_default_watermark();

/// Single labeled tile for classifier evaluation; the generator targets the
/// given class with comfortable margin inside its energy band.
PageImage make_labeled_tile(BlockClass target, int side, Rng& rng);

}  // namespace docwm
