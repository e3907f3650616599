#include "docwm/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>

namespace docwm {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_suffix(const std::string& s, const std::string& suf) {
  if (s.size() < suf.size()) return false;
  std::string tail = s.substr(s.size() - suf.size());
  for (auto& ch : tail) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return tail == suf;
}

// ---- PNG ----

PageImage load_png(const std::string& path, std::FILE* f) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) raise(Errc::IoError, "png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    raise(Errc::IoError, "png init failed");
  }
  PageImage out;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(Errc::CorruptImage, path);
  }
  png_init_io(png, f);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);  // right shift to 8-bit
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(Errc::UnsupportedFormat, path + ": unsupported channel count");
  }
  out = PageImage(static_cast<int>(w), static_cast<int>(h), channels);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    row_ptrs[y] = out.pixels.data() + static_cast<std::size_t>(y) * w * channels;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void save_png(const PageImage& page, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) raise(Errc::IoError, "cannot open " + path + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) raise(Errc::IoError, "png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    raise(Errc::IoError, "png init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(Errc::IoError, "png write failed: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, page.width, page.height, 8,
               page.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(page.height);
  for (int y = 0; y < page.height; ++y)
    rows[y] = const_cast<png_bytep>(page.pixels.data() +
                                    static_cast<std::size_t>(y) * page.width * page.channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---- PGM/PPM (binary variants) ----

int read_pnm_token(std::istream& in) {
  // skips whitespace and '#' comments
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = -1;
  in >> v;
  return in ? v : -1;
}

PageImage load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::FileNotFound, path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    raise(Errc::UnsupportedFormat, path + ": not a binary PGM/PPM");
  int channels = magic[1] == '5' ? 1 : 3;
  int w = read_pnm_token(in);
  int h = read_pnm_token(in);
  int maxval = read_pnm_token(in);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) raise(Errc::CorruptImage, path);
  in.get();  // single whitespace after header
  PageImage out(w, h, channels);
  std::size_t n = out.pixels.size();
  if (maxval < 256) {
    in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) raise(Errc::CorruptImage, path + ": truncated");
  } else {
    std::vector<std::uint8_t> raw(n * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      raise(Errc::CorruptImage, path + ": truncated");
    for (std::size_t i = 0; i < n; ++i)
      out.pixels[i] = static_cast<std::uint8_t>(((raw[2 * i] << 8) | raw[2 * i + 1]) >> 8);
  }
  return out;
}

void save_pnm(const PageImage& page, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  out << (page.channels == 1 ? "P5" : "P6") << "\n"
      << page.width << " " << page.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(page.pixels.data()),
            static_cast<std::streamsize>(page.pixels.size()));
  if (!out) raise(Errc::IoError, "short write: " + path);
}

}  // namespace

PageImage load_page(const std::string& path) {
  if (!std::filesystem::exists(path)) raise(Errc::FileNotFound, path);
  if (has_suffix(path, ".pgm") || has_suffix(path, ".ppm")) return load_pnm(path);
  if (has_suffix(path, ".png")) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) raise(Errc::FileNotFound, path);
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
      raise(Errc::CorruptImage, path + ": bad PNG signature");
    std::rewind(f.get());
    return load_png(path, f.get());
  }
  raise(Errc::UnsupportedFormat, path);
}

void save_page(const PageImage& page, const std::string& path) {
  if (page.width < 1 || page.height < 1) raise(Errc::DimensionMismatch, "empty page");
  if (has_suffix(path, ".png")) {
    save_png(page, path);
  } else if (has_suffix(path, ".pgm")) {
    if (page.channels != 1) raise(Errc::UnsupportedFormat, "PGM requires gray input");
    save_pnm(page, path);
  } else if (has_suffix(path, ".ppm")) {
    if (page.channels != 3) raise(Errc::UnsupportedFormat, "PPM requires RGB input");
    save_pnm(page, path);
  } else {
    raise(Errc::UnsupportedFormat, path);
  }
}

WatermarkBits load_watermark(const std::string& path, int max_side) {
  PageImage img = to_luma(load_page(path));
  if (img.width != img.height)
    raise(Errc::NotSquare, path + ": " + std::to_string(img.width) + "x" +
                               std::to_string(img.height));
  if (img.width > max_side) raise(Errc::NotSquare, path + ": side exceeds maximum");
  WatermarkBits w(img.width);
  for (std::size_t i = 0; i < w.bits.size(); ++i) w.bits[i] = img.pixels[i] >= 128 ? 1 : 0;
  return w;
}

void save_watermark(const WatermarkBits& w, const std::string& path) {
  PageImage img(w.side, w.side, 1);
  for (std::size_t i = 0; i < w.bits.size(); ++i) img.pixels[i] = w.bits[i] ? 255 : 0;
  save_page(img, path);
}

DocumentManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::FileNotFound, path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, path + ": " + e.what());
  }
  DocumentManifest m;
  m.id = j.at("id").get<std::string>();
  m.pages = j.at("pages").get<std::vector<std::string>>();
  m.language = j.value("language", "");
  if (m.pages.empty()) raise(Errc::ConfigError, path + ": manifest has no pages");
  for (std::size_t i = 0; i < m.pages.size(); ++i)
    for (std::size_t k = i + 1; k < m.pages.size(); ++k)
      if (m.pages[i] == m.pages[k]) raise(Errc::ConfigError, path + ": duplicate page path");
  return m;
}

void save_manifest(const DocumentManifest& m, const std::string& path) {
  nlohmann::json j{{"id", m.id}, {"pages", m.pages}, {"language", m.language}};
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace docwm
