#include "docwm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "docwm/image_io.hpp"

namespace docwm {
namespace {

struct Glyphs {
  int height;        // glyph box height
  int min_w, max_w;  // glyph box width range
  int word_min, word_max;  // glyphs per word
  bool headline;     // connecting top rule (indic-style scripts)
};

Glyphs glyphs_for(const std::string& language, double scale = 1.0) {
  auto sc = [scale](int v) { return std::max(2, static_cast<int>(std::lround(v * scale))); };
  if (language == "cjk") return {sc(12), sc(10), sc(12), 1, 2, false};
  if (language == "indic") return {sc(10), sc(4), sc(7), 3, 7, true};
  return {sc(9), sc(4), sc(7), 2, 8, false};  // latin-ish default
}

struct Canvas {
  PageImage& img;

  void fill(int x0, int y0, int w, int h, int v) {
    int x1 = std::min(x0 + w, img.width), y1 = std::min(y0 + h, img.height);
    for (int y = std::max(0, y0); y < y1; ++y)
      for (int x = std::max(0, x0); x < x1; ++x) img.at(x, y) = static_cast<std::uint8_t>(v);
  }

  // glyph box with a one-pixel antialiasing halo, like rasterized type
  void glyph(int x0, int y0, int w, int h, int ink, int halo) {
    fill(x0 - 1, y0 - 1, w + 2, h + 2, halo);
    fill(x0, y0, w, h, ink);
  }

  void frame(int x0, int y0, int w, int h, int t, int v) {
    fill(x0, y0, w, t, v);
    fill(x0, y0 + h - t, w, t, v);
    fill(x0, y0, t, h, v);
    fill(x0 + w - t, y0, t, h, v);
  }
};

// One line of procedurally drawn word boxes.
void draw_text_line(Canvas& cv, Rng& rng, const Glyphs& g, int x0, int y0, int width, int ink,
                    int halo) {
  int x = x0;
  while (x < x0 + width - g.max_w) {
    int glyph_count = g.word_min + static_cast<int>(rng.below(g.word_max - g.word_min + 1));
    int word_start = x;
    for (int k = 0; k < glyph_count && x < x0 + width - g.max_w; ++k) {
      int gw = g.min_w + static_cast<int>(rng.below(g.max_w - g.min_w + 1));
      int asc = static_cast<int>(rng.below(g.height / 4 + 1));  // ascender variation
      cv.glyph(x, y0 + asc, gw, g.height - asc - static_cast<int>(rng.below(2)), ink, halo);
      x += gw + 1 + g.min_w / 3;
    }
    if (g.headline) cv.fill(word_start, y0 - 1, x - word_start - 2, 2, ink);
    x += g.height + static_cast<int>(rng.below(g.height / 2 + 1));  // word gap
  }
}

void draw_paragraphs(Canvas& cv, Rng& rng, const Glyphs& g, int x0, int y0, int w, int h,
                     int ink, int halo) {
  int leading = g.height * 8 / 3;
  int y = y0 + 2;
  int lines_until_break = 4 + static_cast<int>(rng.below(5));
  while (y + g.height < y0 + h) {
    draw_text_line(cv, rng, g, x0, y, w, ink, halo);
    y += leading;
    if (--lines_until_break == 0) {
      y += leading;  // paragraph gap
      lines_until_break = 4 + static_cast<int>(rng.below(5));
    }
  }
}

// Shaded panel with smooth internal structure. Such regions behave like
// the photographic and chart content of real documents: low AC energy but
// a rich, stable singular spectrum. Motifs vary so distinct panels have
// distinct spectra.
void draw_panel(Canvas& cv, Rng& rng, int x0, int y0, int w, int h, int base, int motif) {
  int bg = cv.img.at(std::clamp(x0, 0, cv.img.width - 1), std::clamp(y0, 0, cv.img.height - 1));
  for (int ring = 3; ring >= 1; --ring) {
    int tone = base + (bg - base) * ring / 4;
    cv.fill(x0 - ring, y0 - ring, w + 2 * ring, h + 2 * ring, tone);
  }
  // tonal ramp, horizontal or vertical by motif
  if (motif % 2 == 0) {
    for (int x = 0; x < w; ++x)
      cv.fill(x0 + x, y0, 1, h, base - 6 + (12 * x) / std::max(1, w - 1));
  } else {
    for (int y = 0; y < h; ++y)
      cv.fill(x0, y0 + y, w, 1, base - 6 + (12 * y) / std::max(1, h - 1));
  }
  if (motif % 3 == 2) {
    // soft horizontal bands
    int bands = 3 + static_cast<int>(rng.below(3));
    for (int b = 0; b < bands; ++b) {
      int bh = h / 8 + static_cast<int>(rng.below(h / 8 + 1));
      int by = y0 + static_cast<int>(rng.below(std::max(1, h - bh)));
      int tone = base + (b % 2 ? 9 : -9) + static_cast<int>(rng.below(5));
      for (int ring = 2; ring >= 0; --ring) {
        int t2 = tone + (base - tone) * ring / 3;
        cv.fill(x0 + 2, by + ring, w - 4, bh - 2 * ring, t2);
      }
    }
  } else {
    // soft blobs
    int blobs = 3 + static_cast<int>(rng.below(3));
    for (int b = 0; b < blobs; ++b) {
      int bw = w / 5 + static_cast<int>(rng.below(w / 5 + 1));
      int bh = h / 5 + static_cast<int>(rng.below(h / 5 + 1));
      int bx = x0 + static_cast<int>(rng.below(std::max(1, w - bw)));
      int by = y0 + static_cast<int>(rng.below(std::max(1, h - bh)));
      int tone = base + 6 + static_cast<int>(rng.below(6));
      if (rng.below(2)) tone = base - 6 - static_cast<int>(rng.below(6));
      for (int ring = 3; ring >= 0; --ring) {
        int t2 = tone + (base - tone) * ring / 4;
        cv.fill(bx + ring, by + ring, bw - 2 * ring, bh - 2 * ring, t2);
      }
    }
  }
  // one thick soft stroke along the motif axis
  if (motif % 2 == 0) {
    int py = y0 + h / 3;
    for (int x = x0 + 4; x < x0 + w - 4; ++x) {
      int ny = py + static_cast<int>(rng.below(3)) - 1;
      ny = std::clamp(ny, y0 + 4, y0 + h - 9);
      cv.fill(x, ny - 1, 1, 7, base + 5);
      cv.fill(x, ny, 1, 5, base + 10);
      py = ny;
    }
  } else {
    int px = x0 + w / 3;
    for (int y = y0 + 4; y < y0 + h - 4; ++y) {
      int nx = px + static_cast<int>(rng.below(3)) - 1;
      nx = std::clamp(nx, x0 + 4, x0 + w - 9);
      cv.fill(nx - 1, y, 7, 1, base + 5);
      cv.fill(nx, y, 5, 1, base + 10);
      px = nx;
    }
  }
}

// Filled panel with plot strokes. The border ramps over a few pixels so
// the panel edge does not dominate the block's AC spectrum the way a hard
// step would.
void draw_figure(Canvas& cv, Rng& rng, int x0, int y0, int w, int h, int base) {
  int bg = cv.img.at(std::clamp(x0, 0, cv.img.width - 1), std::clamp(y0, 0, cv.img.height - 1));
  for (int ring = 3; ring >= 0; --ring) {
    int tone = base + (bg - base) * ring / 4;
    cv.fill(x0 - ring, y0 - ring, w + 2 * ring, h + 2 * ring, tone);
  }
  int stroke = base + 12 + static_cast<int>(rng.below(8));
  int py = y0 + h / 2;
  for (int x = x0 + 3; x < x0 + w - 3; ++x) {
    int ny = py + static_cast<int>(rng.below(5)) - 2;
    ny = std::clamp(ny, y0 + 3, y0 + h - 4);
    cv.fill(x, std::min(py, ny), 1, std::abs(ny - py) + 2, stroke);
    py = ny;
  }
  for (int k = 1; k < 4; ++k) cv.fill(x0 + k * w / 4, y0 + 2, 1, h - 4, base - 10);
}

void draw_table(Canvas& cv, Rng& rng, const Glyphs& g, int x0, int y0, int w, int h, int ink,
                int halo) {
  cv.frame(x0, y0, w, h, 2, ink);
  int rows = 3 + static_cast<int>(rng.below(3));
  int cols = 2 + static_cast<int>(rng.below(3));
  for (int r = 1; r < rows; ++r) cv.fill(x0, y0 + r * h / rows, w, 1, ink);
  for (int c = 1; c < cols; ++c) cv.fill(x0 + c * w / cols, y0, 1, h, ink);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      draw_text_line(cv, rng, g, x0 + c * w / cols + 4, y0 + r * h / rows + 4,
                     w / cols - 8, ink, halo);
}

PageImage gray_to_tinted_rgb(const PageImage& gray) {
  PageImage out(gray.width, gray.height, 3);
  for (int y = 0; y < gray.height; ++y) {
    for (int x = 0; x < gray.width; ++x) {
      int v = gray.at(x, y);
      // warm paper cast, fading to neutral in dark ink
      out.at(x, y, 0) = static_cast<std::uint8_t>(std::min(255, v + (v * 10) / 255));
      out.at(x, y, 1) = static_cast<std::uint8_t>(v);
      out.at(x, y, 2) = static_cast<std::uint8_t>(std::max(0, v - (v * 16) / 255));
    }
  }
  return out;
}

}  // namespace

PageImage generate_page(const CorpusConfig& cfg, int doc_index, int page_index) {
  if (cfg.canon_w < 256 || cfg.canon_h < 256)
    raise(Errc::ConfigError, "canonical dims too small for a page");
  Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(doc_index) * 7919 +
          static_cast<std::uint64_t>(page_index) * 104729 + 17);

  int m_l = 40 + static_cast<int>(rng.below(41));
  int m_r = 40 + static_cast<int>(rng.below(41));
  int m_t = 40 + static_cast<int>(rng.below(41));
  int m_b = 40 + static_cast<int>(rng.below(41));

  // The frame's outer edge sits one pixel inside the detected margin: the
  // Sobel response starts one pixel before the ink, so the crop spans
  // [m_l-? .. ] exactly canon_w columns. Frame box width = canon_w - 2.
  int frame_x = m_l + 1, frame_y = m_t + 1;
  int frame_w = cfg.canon_w - 2, frame_h = cfg.canon_h - 2;
  int page_w = frame_x + frame_w + 1 + m_r;
  int page_h = frame_y + frame_h + 1 + m_b;

  int bg = cfg.tinted ? 208 + static_cast<int>(rng.below(10)) : 255;
  // page margins stay white; the tint covers the content box only, so
  // white-filled geometry attacks cannot paint false edges into the margins
  PageImage gray(page_w, page_h, 1, 255);
  Canvas cv{gray};
  cv.fill(frame_x, frame_y, frame_w, frame_h, bg);
  int ink = 112 + static_cast<int>(rng.below(14));
  cv.frame(frame_x, frame_y, frame_w, frame_h, 2, 150);

  Glyphs g = glyphs_for(cfg.language, cfg.type_scale);
  int halo = (ink + bg) / 2;
  int pad = 14;
  int ix = frame_x + pad, iy = frame_y + pad;
  int iw = frame_w - 2 * pad, ih = frame_h - 2 * pad;
  int gutter = 18;
  int col_w = (iw - gutter) / 2;

  if (cfg.layout == "text") {
    draw_paragraphs(cv, rng, g, ix, iy, col_w, ih, ink, halo);
    draw_paragraphs(cv, rng, g, ix + col_w + gutter, iy, col_w, ih, ink, halo);
  } else if (cfg.layout == "figures") {
    int fig_h = ih * 2 / 5;
    draw_figure(cv, rng, ix, iy, col_w, fig_h, 122 + static_cast<int>(rng.below(10)));
    draw_figure(cv, rng, ix + col_w + gutter, iy + ih / 3, col_w, fig_h,
                122 + static_cast<int>(rng.below(10)));
    draw_paragraphs(cv, rng, g, ix, iy + fig_h + 24, col_w, ih - fig_h - 24, ink, halo);
    draw_table(cv, rng, g, ix + col_w + gutter, iy + ih / 3 + fig_h + 24, col_w,
               ih - ih / 3 - fig_h - 24 - pad, ink, halo);
  } else if (cfg.layout == "report") {
    // generous whitespace: a text body over less than half the area, one
    // figure and a small table, the lower part left empty
    int text_h = ih / 4;
    draw_paragraphs(cv, rng, g, ix, iy, col_w, text_h, ink, halo);
    draw_paragraphs(cv, rng, g, ix + col_w + gutter, iy, col_w * 3 / 4, ih / 5, ink, halo);
    // shaded panels aligned to the block grid (content coordinates are
    // canonical coordinates, frame anchored), so their interior blocks are
    // pure panel texture
    const int bs = 128;
    int rows_n = cfg.canon_h / bs, cols_n = cfg.canon_w / bs;
    int prow = rows_n / 2;
    int prow_span = std::min(2, rows_n - prow - 1);
    auto bx = [&](int c) { return frame_x - 1 + c * bs; };
    auto by = [&](int r) { return frame_y - 1 + r * bs; };
    // single-block-wide panels with distinct motifs: wider panels would
    // survive page-halving attacks by sliding onto their own payloads
    int pcols[3] = {cols_n / 5, cols_n / 2, (4 * cols_n) / 5};
    int npanels = cols_n >= 5 ? 3 : 2;
    for (int pi = 0; pi < npanels && prow_span >= 1; ++pi) {
      int base = 126 + 6 * pi + static_cast<int>(rng.below(8));
      draw_panel(cv, rng, bx(pcols[pi]) + 6, by(prow) + 6, bs - 12, prow_span * bs - 12, base,
                 pi);
    }
    if (rows_n - (prow + prow_span) >= 2)
      draw_table(cv, rng, g, bx(0) + 24, by(prow + prow_span) + 20, 2 * bs, bs - 44, ink,
                 halo);
  } else {  // mixed
    int text_h = ih * 2 / 5;
    draw_paragraphs(cv, rng, g, ix, iy, col_w, text_h, ink, halo);
    draw_paragraphs(cv, rng, g, ix + col_w + gutter, iy, col_w, text_h / 2, ink, halo);
    int fig_y = iy + text_h + 20;
    int fig_h = ih / 4;
    draw_figure(cv, rng, ix, fig_y, col_w * 3 / 4, fig_h,
                122 + static_cast<int>(rng.below(10)));
    draw_table(cv, rng, g, ix + col_w + gutter, fig_y, col_w, fig_h, ink, halo);
  }

  return cfg.rgb ? gray_to_tinted_rgb(gray) : gray;
}

std::vector<DocumentManifest> generate_corpus(const CorpusConfig& cfg,
                                              const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  std::vector<DocumentManifest> out;
  for (int d = 0; d < cfg.documents; ++d) {
    DocumentManifest m;
    m.id = "doc" + std::to_string(d);
    m.language = cfg.language;
    for (int p = 0; p < cfg.pages_per_doc; ++p) {
      PageImage page = generate_page(cfg, d, p);
      std::string path =
          (fs::path(outdir) / (m.id + "_p" + std::to_string(p) + ".png")).string();
      save_page(page, path);
      m.pages.push_back(path);
    }
    save_manifest(m, (fs::path(outdir) / (m.id + ".json")).string());
    out.push_back(std::move(m));
  }
  save_watermark(make_default_watermark(), (fs::path(outdir) / "watermark.png").string());
  return out;
}

WatermarkBits make_default_watermark() {
  // balanced blocky mark built from 4x4 px cells, shifted one pixel
  // horizontally. The coarse structure keeps the mark low rank so its
  // energy sits in a few robust singular values; the shift keeps a
  // moderate share of energy in the wavelet detail bands, like a drawn
  // logo rather than a grid-aligned pattern.
  WatermarkBits w(32);
  Rng rng(0x5eed0000cafeULL);
  std::vector<int> cells(64);
  for (int i = 0; i < 64; ++i) cells[i] = i;
  for (int i = 63; i > 0; --i) std::swap(cells[i], cells[rng.below(i + 1)]);
  for (int k = 0; k < 32; ++k) {
    int cy = cells[k] / 8, cx = cells[k] % 8;
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) w.at((cx * 4 + x + 1) % 32, cy * 4 + y) = 1;
  }
  return w;
}

PageImage make_labeled_tile(BlockClass target, int side, Rng& rng) {
  PageImage tile(side, side, 1, 255);
  Canvas cv{tile};
  Glyphs g = glyphs_for("latin", 2.0);
  switch (target) {
    case BlockClass::CW: {
      // near-white: a few specks or a word, energy stays above 0.9*255
      int specks = static_cast<int>(rng.below(4));
      for (int k = 0; k < specks; ++k)
        cv.fill(static_cast<int>(rng.below(side - 8)), static_cast<int>(rng.below(side - 4)),
                6, 3, 40);
      break;
    }
    case BlockClass::CB: {
      cv.fill(0, 0, side, side, static_cast<int>(rng.below(14)));
      int specks = static_cast<int>(rng.below(4));
      for (int k = 0; k < specks; ++k)
        cv.fill(static_cast<int>(rng.below(side - 8)), static_cast<int>(rng.below(side - 4)),
                6, 3, 90);
      break;
    }
    case BlockClass::CT: {
      // dense text over lightly tinted paper; the tint keeps headroom so
      // additive marks are not truncated at 255
      int bg = 210 + static_cast<int>(rng.below(10));
      cv.fill(0, 0, side, side, bg);
      int ink = 80 + static_cast<int>(rng.below(45));
      Rng sub = rng.fork(1);
      draw_paragraphs(cv, sub, g, 2, 2, side - 4, side - 4, ink, (ink + bg) / 2);
      break;
    }
    case BlockClass::PT: {
      // sparse text over light-gray wash: energy in the text band but
      // dark ink well under the coverage bound
      cv.fill(0, 0, side, side, 200 + static_cast<int>(rng.below(20)));
      Rng sub = rng.fork(2);
      Glyphs small = g;
      small.height = 8;
      draw_text_line(cv, sub, small, 4, side / 2, side / 5, 70, 140);
      break;
    }
    case BlockClass::PTPG: {
      int bg = 206 + static_cast<int>(rng.below(12));
      cv.fill(0, 0, side, side, bg);
      int ink = 30 + static_cast<int>(rng.below(40));
      Rng sub = rng.fork(3);
      draw_paragraphs(cv, sub, g, 2, 2, side - 4, side / 2 - 4, ink, (ink + bg) / 2);
      draw_figure(cv, sub, 4, side / 2 + 4, side - 8, side / 2 - 10,
                  120 + static_cast<int>(sub.below(10)));
      break;
    }
    case BlockClass::CG: {
      Rng sub = rng.fork(4);
      cv.fill(0, 0, side, side, 88 + static_cast<int>(sub.below(10)));
      draw_figure(cv, sub, 4, 4, side - 8, side - 8, 70 + static_cast<int>(sub.below(10)));
      break;
    }
  }
  return tile;
}

}  // namespace docwm
