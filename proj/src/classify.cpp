#include "docwm/classify.hpp"

#include <array>
#include <cmath>

namespace docwm {

const char* block_class_name(BlockClass c) {
  switch (c) {
    case BlockClass::CW: return "CW";
    case BlockClass::CB: return "CB";
    case BlockClass::PT: return "PT";
    case BlockClass::CT: return "CT";
    case BlockClass::PTPG: return "PTPG";
    case BlockClass::CG: return "CG";
  }
  return "?";
}

BlockClass block_class_from_name(const std::string& name) {
  for (BlockClass c : {BlockClass::CW, BlockClass::CB, BlockClass::PT, BlockClass::CT,
                       BlockClass::PTPG, BlockClass::CG})
    if (name == block_class_name(c)) return c;
  raise(Errc::ConfigError, "unknown block class: " + name);
}

void EnergyThresholds::validate() const {
  if (!(1.0 > g1 && g1 > g2 && g2 > g3 && g3 > g4 && g4 > 0.0))
    raise(Errc::ConfigError, "energy thresholds must satisfy 1 > g1 > g2 > g3 > g4 > 0");
  if (pt_coverage < 0.0 || pt_coverage > 1.0)
    raise(Errc::ConfigError, "pt_coverage must lie in [0,1]");
}

double block_energy(const PageImage& block) {
  PageImage g = to_luma(block);
  if (g.pixels.empty()) raise(Errc::DimensionMismatch, "empty block");
  // DC of the orthonormal DCT is sum/sqrt(n*m); dividing by sqrt(n*m)
  // again gives the mean, so the RMS bound B_max = 255 holds exactly.
  double sum = 0.0;
  for (auto p : g.pixels) sum += p;
  return sum / static_cast<double>(g.pixels.size());
}

double ink_coverage(const PageImage& block) {
  PageImage g = to_luma(block);
  std::size_t dark = 0;
  for (auto p : g.pixels)
    if (p < 128) ++dark;
  return static_cast<double>(dark) / static_cast<double>(g.pixels.size());
}

BlockClass classify_energy(const PageImage& block, const EnergyThresholds& t) {
  t.validate();
  constexpr double b_max = 255.0;
  double e = block_energy(block);
  if (e > t.g1 * b_max) return BlockClass::CW;
  if (e > t.g2 * b_max) {
    // complete-text band; sparse tiles fall back to PT
    return ink_coverage(block) < t.pt_coverage ? BlockClass::PT : BlockClass::CT;
  }
  if (e > t.g3 * b_max) return BlockClass::PTPG;
  if (e > t.g4 * b_max) return BlockClass::CG;
  return BlockClass::CB;
}

HistClass classify_histogram(const PageImage& block, const HistThresholds& t) {
  PageImage g = to_luma(block);
  std::array<double, 256> h{};
  for (auto p : g.pixels) h[p] += 1.0;
  double l2 = 0.0, l1 = 0.0;
  for (double x : h) {
    l2 += x * x;
    l1 += x;
  }
  double s = l1 / (std::sqrt(l2) + t.eps * t.eps);
  if (s > t.t1 || s < t.t3) return HistClass::NonTexture;
  if (s > t.t2) return HistClass::Graphics;
  return HistClass::Text;
}

BlockStats block_stats(const PageImage& block) {
  PageImage g = to_luma(block);
  double n = static_cast<double>(g.pixels.size());
  double sum = 0.0, sum2 = 0.0;
  for (auto p : g.pixels) {
    sum += p;
    sum2 += static_cast<double>(p) * p;
  }
  double mean = sum / n;
  return BlockStats{mean, sum2 / n - mean * mean};
}

std::vector<BlockClass> classify_grid(const BlockGrid& grid, const EnergyThresholds& t) {
  std::vector<BlockClass> out;
  out.reserve(grid.blocks.size());
  for (const auto& b : grid.blocks) out.push_back(classify_energy(b, t));
  return out;
}

}  // namespace docwm
