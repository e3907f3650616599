#include "docwm/attacks.hpp"

#include <jpeglib.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <numbers>

#include <nlohmann/json.hpp>

#include "docwm/rng.hpp"

namespace docwm {
namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  std::longjmp(mgr->jump, 1);
}

}  // namespace

PageImage jpeg_compress(const PageImage& page, int quality) {
  if (quality < 1 || quality > 100) raise(Errc::ConfigError, "JPEG quality must be in [1,100]");

  unsigned char* buf = nullptr;
  unsigned long buf_size = 0;
  {
    jpeg_compress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
      jpeg_destroy_compress(&cinfo);
      std::free(buf);
      raise(Errc::IoError, "JPEG encode failed");
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buf, &buf_size);
    cinfo.image_width = static_cast<JDIMENSION>(page.width);
    cinfo.image_height = static_cast<JDIMENSION>(page.height);
    cinfo.input_components = page.channels;
    cinfo.in_color_space = page.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    std::vector<JSAMPLE> row(static_cast<std::size_t>(page.width) * page.channels);
    while (cinfo.next_scanline < cinfo.image_height) {
      const std::uint8_t* src = page.pixels.data() +
                                static_cast<std::size_t>(cinfo.next_scanline) * row.size();
      std::memcpy(row.data(), src, row.size());
      JSAMPROW rp = row.data();
      jpeg_write_scanlines(&cinfo, &rp, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
  }

  PageImage out;
  {
    jpeg_decompress_struct dinfo;
    JpegErrorMgr err;
    dinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
      jpeg_destroy_decompress(&dinfo);
      std::free(buf);
      raise(Errc::CorruptImage, "JPEG decode failed");
    }
    jpeg_create_decompress(&dinfo);
    jpeg_mem_src(&dinfo, buf, buf_size);
    jpeg_read_header(&dinfo, TRUE);
    dinfo.out_color_space = page.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&dinfo);
    out = PageImage(static_cast<int>(dinfo.output_width), static_cast<int>(dinfo.output_height),
                    page.channels);
    std::size_t stride = static_cast<std::size_t>(out.width) * out.channels;
    while (dinfo.output_scanline < dinfo.output_height) {
      JSAMPROW rp = out.pixels.data() + static_cast<std::size_t>(dinfo.output_scanline) * stride;
      jpeg_read_scanlines(&dinfo, &rp, 1);
    }
    jpeg_finish_decompress(&dinfo);
    jpeg_destroy_decompress(&dinfo);
  }
  std::free(buf);
  return out;
}

PageImage add_gaussian_noise(const PageImage& page, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) raise(Errc::ConfigError, "noise sigma must be >= 0");
  if (sigma == 0.0) return page;
  // the knob is the noise variance, so the added samples have std sqrt(sigma)
  double dev = std::sqrt(sigma);
  Rng rng(seed);
  PageImage out = page;
  for (auto& p : out.pixels) {
    double v = p + dev * rng.next_gauss();
    p = quantize_u8(v);
  }
  return out;
}

namespace {

PageImage rotate_about_center(const PageImage& page, double degrees, int out_w, int out_h) {
  double rad = degrees * std::numbers::pi / 180.0;
  double cs = std::cos(rad), sn = std::sin(rad);
  double cx = (page.width - 1) / 2.0, cy = (page.height - 1) / 2.0;
  double ox = (out_w - 1) / 2.0, oy = (out_h - 1) / 2.0;
  PageImage out(out_w, out_h, page.channels, 255);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      // inverse map into the source
      double dx = x - ox, dy = y - oy;
      double sx = cs * dx + sn * dy + cx;
      double sy = -sn * dx + cs * dy + cy;
      int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      if (x0 < -1 || y0 < -1 || x0 > page.width - 1 || y0 > page.height - 1) continue;
      double wx = sx - x0, wy = sy - y0;
      for (int c = 0; c < page.channels; ++c) {
        auto sample = [&](int xx, int yy) -> double {
          if (xx < 0 || yy < 0 || xx >= page.width || yy >= page.height) return 255.0;
          return page.at(xx, yy, c);
        };
        double v = (1 - wy) * ((1 - wx) * sample(x0, y0) + wx * sample(x0 + 1, y0)) +
                   wy * ((1 - wx) * sample(x0, y0 + 1) + wx * sample(x0 + 1, y0 + 1));
        out.at(x, y, c) = quantize_u8(v);
      }
    }
  }
  return out;
}

}  // namespace

PageImage rotate(const PageImage& page, double degrees) {
  if (std::abs(degrees) > 45.0) raise(Errc::ConfigError, "rotation limited to +/-45 degrees");
  if (degrees == 0.0) return page;
  return rotate_about_center(page, degrees, page.width, page.height);
}

PageImage scale(const PageImage& page, double fx, double fy) {
  if (fx <= 0.0 || fy <= 0.0) raise(Errc::ConfigError, "scale factors must be positive");
  int w = std::max(1, static_cast<int>(std::lround(page.width * fx)));
  int h = std::max(1, static_cast<int>(std::lround(page.height * fy)));
  return resize_bilinear(page, w, h);
}

double detect_skew(const PageImage& page) {
  PageImage luma = to_luma(page);
  std::vector<std::pair<int, int>> ink;  // (x, y)
  for (int y = 0; y < luma.height; ++y)
    for (int x = 0; x < luma.width; ++x)
      if (luma.at(x, y) < 128) ink.emplace_back(x, y);
  if (ink.size() < static_cast<std::size_t>(luma.width) * luma.height / 100)
    raise(Errc::NoContent, "too little ink for skew estimation");

  // Deterministic thinning keeps the scan cheap on dense pages.
  std::size_t step = std::max<std::size_t>(1, ink.size() / 120000);

  double diag = std::hypot(luma.width, luma.height);
  int bins = static_cast<int>(diag) + 2;
  std::vector<double> hist(bins);

  double best_var = -1.0, best_angle = 0.0;
  for (int ai = -200; ai <= 200; ++ai) {
    double angle = ai * 0.05;
    double rad = angle * std::numbers::pi / 180.0;
    double cs = std::cos(rad), sn = std::sin(rad);
    std::fill(hist.begin(), hist.end(), 0.0);
    double offset = diag / 2.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < ink.size(); i += step, ++used) {
      double yp = ink[i].second * cs - ink[i].first * sn + offset;
      int b = static_cast<int>(yp);
      if (b >= 0 && b < bins) hist[b] += 1.0;
    }
    double mean = static_cast<double>(used) / bins;
    double var = 0.0;
    for (double h : hist) {
      double d = h - mean;
      var += d * d;
    }
    var /= bins;
    if (var > best_var || (var == best_var && std::abs(angle) < std::abs(best_angle))) {
      best_var = var;
      best_angle = angle;
    }
  }
  return best_angle;
}

PageImage correct_skew(const PageImage& page) { return rotate(page, -detect_skew(page)); }

ScreenQuality screen_quality_from_name(const std::string& name) {
  if (name == "low" || name == "Low") return ScreenQuality::Low;
  if (name == "normal" || name == "Normal") return ScreenQuality::Normal;
  if (name == "good" || name == "Good") return ScreenQuality::Good;
  raise(Errc::ConfigError, "screen quality must be low|normal|good");
}

PageImage print_screen_sim(const PageImage& page, ScreenQuality q, std::uint64_t seed) {
  double factor = q == ScreenQuality::Low ? 0.8 : (q == ScreenQuality::Normal ? 1.1 : 1.25);
  int jpeg_q = q == ScreenQuality::Low ? 40 : (q == ScreenQuality::Normal ? 70 : 90);
  Rng rng(seed);
  double jitter = rng.uniform(-0.3, 0.3);
  PageImage out = scale(page, factor, factor);
  out = jpeg_compress(out, jpeg_q);
  return rotate(out, jitter);
}

PageImage stitch_columns(const PageImage& page, const std::vector<int>& cut_columns,
                         int gap_delta, std::uint64_t seed) {
  if (cut_columns.empty()) raise(Errc::InvalidCut, "no cut columns given");
  std::vector<int> cuts = cut_columns;
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] <= 0 || cuts[i] >= page.width) raise(Errc::InvalidCut, "cut outside page");
    if (i > 0 && cuts[i] == cuts[i - 1]) raise(Errc::InvalidCut, "zero-width segment");
  }

  Rng rng(seed);
  PageImage out(page.width, page.height, page.channels, 255);
  int src_x = 0, dst_x = 0;
  std::vector<int> bounds = cuts;
  bounds.push_back(page.width);
  for (std::size_t s = 0; s < bounds.size(); ++s) {
    int seg_w = bounds[s] - src_x;
    int shift_y = s == 0 ? 0 : static_cast<int>(rng.below(7)) - 3;  // [-3, 3]
    for (int y = 0; y < page.height; ++y) {
      int sy = y - shift_y;
      if (sy < 0 || sy >= page.height) continue;
      for (int x = 0; x < seg_w; ++x) {
        int dx = dst_x + x;
        if (dx < 0 || dx >= page.width) continue;
        for (int c = 0; c < page.channels; ++c)
          out.at(dx, y, c) = page.at(src_x + x, sy, c);
      }
    }
    src_x = bounds[s];
    dst_x += seg_w + gap_delta;
  }
  return out;
}

PageImage stitch_pages(const PageImage& a, const PageImage& b) {
  if (a.height != b.height || a.channels != b.channels)
    raise(Errc::HeightMismatch, "stitched pages must share height and channels");
  int half_l = a.width / 2;
  int half_r = a.width - half_l;
  PageImage left = resize_bilinear(a, half_l, a.height);
  PageImage right = resize_bilinear(b, half_r, a.height);
  PageImage out(a.width, a.height, a.channels, 255);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < half_l; ++x)
      for (int c = 0; c < a.channels; ++c) out.at(x, y, c) = left.at(x, y, c);
    for (int x = 0; x < half_r; ++x)
      for (int c = 0; c < a.channels; ++c) out.at(half_l + x, y, c) = right.at(x, y, c);
  }
  return out;
}

EditKind edit_kind_from_name(const std::string& name) {
  if (name == "strike") return EditKind::StrikeThrough;
  if (name == "highlight") return EditKind::Highlight;
  if (name == "wordswap") return EditKind::WordSwap;
  raise(Errc::ConfigError, "edit kind must be strike|highlight|wordswap");
}

PageImage block_edit(const PageImage& page, const Margins& m, const BlockGrid& grid,
                     const std::vector<int>& indices, EditKind kind, std::uint64_t seed) {
  PageImage out = page;
  Rng rng(seed);
  for (int idx : indices) {
    if (idx < 0 || idx >= grid.count()) raise(Errc::IndexOutOfRange, "block index out of range");
    int bx = m.left + (idx % grid.cols) * grid.block_w;
    int by = m.top + (idx / grid.cols) * grid.block_h;
    if (bx + grid.block_w > page.width || by + grid.block_h > page.height)
      raise(Errc::IndexOutOfRange, "block region falls outside the page");

    auto luma_at = [&](int x, int y) {
      if (out.channels == 1) return static_cast<double>(out.at(x, y));
      return 0.299 * out.at(x, y, 0) + 0.587 * out.at(x, y, 1) + 0.114 * out.at(x, y, 2);
    };

    switch (kind) {
      case EditKind::StrikeThrough: {
        // find text-line bands via the row ink profile, strike their centers
        std::vector<int> inked(grid.block_h, 0);
        for (int y = 0; y < grid.block_h; ++y) {
          int cnt = 0;
          for (int x = 0; x < grid.block_w; ++x)
            if (luma_at(bx + x, by + y) < 128) ++cnt;
          inked[y] = cnt > grid.block_w / 20 ? 1 : 0;
        }
        for (int y = 0; y < grid.block_h;) {
          if (!inked[y]) {
            ++y;
            continue;
          }
          int y0 = y;
          while (y < grid.block_h && inked[y]) ++y;
          int mid = (y0 + y - 1) / 2;
          for (int line = mid; line < std::min(mid + 2, grid.block_h); ++line)
            for (int x = 0; x < grid.block_w; ++x)
              for (int c = 0; c < out.channels; ++c) out.at(bx + x, by + line, c) = 0;
        }
        break;
      }
      case EditKind::Highlight: {
        for (int y = 0; y < grid.block_h; ++y)
          for (int x = 0; x < grid.block_w; ++x)
            if (luma_at(bx + x, by + y) >= 128)
              for (int c = 0; c < out.channels; ++c) {
                // damp the background toward a highlighter tone; blue
                // channel loses the most so color pages tint yellow
                double f = (out.channels == 3 && c == 2) ? 0.78 : 0.9;
                out.at(bx + x, by + y, c) =
                    quantize_u8(out.at(bx + x, by + y, c) * f);
              }
        break;
      }
      case EditKind::WordSwap: {
        int ww = std::max(8, grid.block_w / 4);
        int wh = std::max(4, grid.block_h / 8);
        int sx = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.block_w - ww)));
        int sy = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.block_h - wh)));
        int dx = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.block_w - ww)));
        int dy = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.block_h - wh)));
        std::vector<std::uint8_t> patch(static_cast<std::size_t>(ww) * wh * out.channels);
        for (int y = 0; y < wh; ++y)
          for (int x = 0; x < ww; ++x)
            for (int c = 0; c < out.channels; ++c)
              patch[(static_cast<std::size_t>(y) * ww + x) * out.channels + c] =
                  out.at(bx + sx + x, by + sy + y, c);
        for (int y = 0; y < wh; ++y)
          for (int x = 0; x < ww; ++x)
            for (int c = 0; c < out.channels; ++c)
              out.at(bx + dx + x, by + dy + y, c) =
                  patch[(static_cast<std::size_t>(y) * ww + x) * out.channels + c];
        break;
      }
    }
  }
  return out;
}

AttackSpec attack_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, std::string("attack spec: ") + e.what());
  }
  AttackSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.q = j.value("q", s.q);
  s.sigma = j.value("sigma", s.sigma);
  s.degrees = j.value("degrees", s.degrees);
  s.fx = j.value("fx", s.fx);
  s.fy = j.value("fy", s.fy);
  s.crop_x = j.value("crop_x", 0);
  s.crop_y = j.value("crop_y", 0);
  s.crop_w = j.value("crop_w", 0);
  s.crop_h = j.value("crop_h", 0);
  s.quality = j.value("quality", s.quality);
  s.cuts = j.value("cuts", s.cuts);
  s.gap_delta = j.value("gap_delta", 0);
  s.indices = j.value("indices", s.indices);
  s.edit = j.value("edit", s.edit);
  s.seed = j.value("seed", static_cast<std::uint64_t>(0));
  return s;
}

std::string attack_spec_to_json(const AttackSpec& s) {
  nlohmann::json j{{"kind", s.kind}, {"seed", s.seed}};
  if (s.kind == "jpeg") j["q"] = s.q;
  if (s.kind == "noise") j["sigma"] = s.sigma;
  if (s.kind == "rotate") j["degrees"] = s.degrees;
  if (s.kind == "scale") {
    j["fx"] = s.fx;
    j["fy"] = s.fy;
  }
  if (s.kind == "crop") {
    j["crop_x"] = s.crop_x;
    j["crop_y"] = s.crop_y;
    j["crop_w"] = s.crop_w;
    j["crop_h"] = s.crop_h;
  }
  if (s.kind == "printscreen") j["quality"] = s.quality;
  if (s.kind == "stitch_columns") {
    j["cuts"] = s.cuts;
    j["gap_delta"] = s.gap_delta;
  }
  if (s.kind == "block_edit") {
    j["indices"] = s.indices;
    j["edit"] = s.edit;
  }
  return j.dump();
}

PageImage apply_attack(const PageImage& page, const AttackSpec& s) {
  if (s.kind == "jpeg") return jpeg_compress(page, static_cast<int>(s.q));
  if (s.kind == "noise") return add_gaussian_noise(page, s.sigma, s.seed);
  if (s.kind == "rotate") return rotate(page, s.degrees);
  if (s.kind == "scale") return scale(page, s.fx, s.fy);
  if (s.kind == "crop") {
    if (s.crop_w < 1 || s.crop_h < 1 || s.crop_x < 0 || s.crop_y < 0 ||
        s.crop_x + s.crop_w > page.width || s.crop_y + s.crop_h > page.height)
      raise(Errc::ConfigError, "crop rectangle outside page");
    return crop(page, Margins{s.crop_x, page.width - s.crop_x - s.crop_w, s.crop_y,
                              page.height - s.crop_y - s.crop_h});
  }
  if (s.kind == "printscreen")
    return print_screen_sim(page, screen_quality_from_name(s.quality), s.seed);
  if (s.kind == "stitch_columns") return stitch_columns(page, s.cuts, s.gap_delta, s.seed);
  raise(Errc::ConfigError, "unknown or multi-page attack kind: " + s.kind);
}

}  // namespace docwm
