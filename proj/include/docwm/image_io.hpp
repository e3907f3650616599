#pragma once

#include <string>

#include "docwm/image.hpp"

namespace docwm {

/// Decode a PNG, PGM (P5) or PPM (P6) file. 16-bit samples are
/// right-shifted to 8 bits; palette/alpha PNGs are expanded/stripped.
PageImage load_page(const std::string& path);

/// Lossless save; format chosen by extension (.png, .pgm, .ppm).
void save_page(const PageImage& page, const std::string& path);

/// Load a square black/white image as bits (pixel >= 128 -> 1).
WatermarkBits load_watermark(const std::string& path, int max_side = 256);

void save_watermark(const WatermarkBits& w, const std::string& path);

DocumentManifest load_manifest(const std::string& path);
void save_manifest(const DocumentManifest& m, const std::string& path);

}  // namespace docwm
