#include "docwm/fingerprint.hpp"

#include <algorithm>
#include <cmath>

#include "docwm/metrics.hpp"
#include "docwm/page_prep.hpp"
#include "docwm/rng.hpp"

namespace docwm {
namespace {

WatermarkBits balanced_mark(int side, Rng& rng) {
  WatermarkBits w(side);
  int n = side * side;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
  for (int i = 0; i < n / 2; ++i) w.bits[idx[i]] = 1;
  return w;
}

double mark_corr(const WatermarkBits& a, const WatermarkBits& b) {
  Matrix x(a.side, a.side), y(b.side, b.side);
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    x.a[i] = a.bits[i];
    y.a[i] = b.bits[i];
  }
  double r = pearson(x, y);
  return std::isnan(r) ? 0.0 : r;
}

}  // namespace

FingerprintSet generate_fingerprints(int k, int side, std::uint64_t seed, double max_abs_corr) {
  if (k < 1) raise(Errc::ConfigError, "need at least one fingerprint");
  if (k > side * side / 8)
    raise(Errc::BoundUnsatisfiable, "too many fingerprints for the mark size");
  FingerprintSet out;
  out.seed = seed;
  out.max_abs_corr = max_abs_corr;
  Rng rng(seed);
  const int max_attempts = 1000 * k;
  int attempts = 0;
  while (static_cast<int>(out.marks.size()) < k) {
    if (++attempts > max_attempts)
      raise(Errc::BoundUnsatisfiable, "pairwise correlation bound not reachable");
    WatermarkBits cand = balanced_mark(side, rng);
    bool ok = true;
    for (const auto& m : out.marks)
      if (std::abs(mark_corr(cand, m)) > max_abs_corr) {
        ok = false;
        break;
      }
    if (ok) out.marks.push_back(std::move(cand));
  }
  return out;
}

PageImage collude_average(const std::vector<PageImage>& copies) {
  if (copies.empty()) raise(Errc::DimensionMismatch, "no copies to average");
  const PageImage& first = copies.front();
  for (const auto& c : copies)
    if (!c.same_dims(first)) raise(Errc::DimensionMismatch, "copies differ in shape");
  PageImage out(first.width, first.height, first.channels);
  double inv = 1.0 / static_cast<double>(copies.size());
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    double acc = 0.0;
    for (const auto& c : copies) acc += c.pixels[i];
    out.pixels[i] = quantize_u8(acc * inv);
  }
  return out;
}

std::vector<PageImage> collude_average_docs(const std::vector<std::vector<PageImage>>& docs) {
  if (docs.empty()) raise(Errc::DimensionMismatch, "no documents to average");
  std::size_t pages = docs.front().size();
  for (const auto& d : docs)
    if (d.size() != pages) raise(Errc::DimensionMismatch, "documents differ in page count");
  std::vector<PageImage> out;
  for (std::size_t p = 0; p < pages; ++p) {
    std::vector<PageImage> column;
    column.reserve(docs.size());
    for (const auto& d : docs) column.push_back(d[p]);
    out.push_back(collude_average(column));
  }
  return out;
}

FingerprintedCopies embed_fingerprints(const std::vector<PageImage>& original,
                                       const PipelineConfig& cfg, int users,
                                       std::uint64_t seed) {
  FingerprintedCopies out;
  out.fps = generate_fingerprints(users, 32, seed);
  out.copies.reserve(users);
  for (int u = 0; u < users; ++u)
    out.copies.push_back(embed_document(original, out.fps.marks[u], cfg));
  return out;
}

CollusionDetection detect_colluders(const std::vector<PageImage>& colluded_pages,
                                    const std::vector<SideInfo>& sides,
                                    const FingerprintSet& fps, double threshold) {
  if (sides.empty() || sides.size() != fps.marks.size())
    raise(Errc::SideInfoMismatch, "need one side info per fingerprint");
  const SideInfo& ref = sides.front();
  for (const auto& s : sides)
    if (s.algo != ref.algo || s.canon_w != ref.canon_w || s.canon_h != ref.canon_h ||
        s.block_side != ref.block_side || s.pages.size() != ref.pages.size())
      raise(Errc::SideInfoMismatch, "side infos disagree on pipeline geometry");

  CollusionDetection out;
  out.threshold = threshold;
  out.per_user_nc.resize(sides.size(), 0.0);

  if (ref.algo == AlgoId::Svd) {
    // The suspect-side spectra are user independent, so compute them once
    // and finish each user with a cheap low-rank reconstruction.
    if (colluded_pages.size() != ref.pages.size())
      raise(Errc::SideInfoMismatch, "page count disagrees with side info");
    std::vector<std::vector<std::vector<double>>> spectra(colluded_pages.size());
    for (std::size_t pi = 0; pi < colluded_pages.size(); ++pi) {
      const PageSideInfo& psi = ref.pages[pi];
      if (psi.blank) continue;
      PageImage canon =
          locate_canonical_page(colluded_pages[pi], ref, static_cast<int>(pi));
      BlockGrid grid = segment(canon, ref.block_side, ref.block_side);
      spectra[pi].resize(grid.count());
      for (const BlockRecord& rec : psi.blocks) {
        if (!rec.has_payload()) continue;
        spectra[pi][rec.index] = svd(to_matrix(grid.blocks[rec.index])).s;
      }
    }
    for (std::size_t u = 0; u < sides.size(); ++u) {
      const SideInfo& s = sides[u];
      std::vector<double> ncs;
      for (std::size_t pi = 0; pi < s.pages.size(); ++pi) {
        for (const BlockRecord& rec : s.pages[pi].blocks) {
          if (!rec.svd) continue;
          const auto& s_a = spectra[pi][rec.index];
          int rank = std::min<int>({s.params.svd_rank, s.mark_u.cols,
                                    static_cast<int>(rec.svd->s_c.size())});
          std::size_t nn = std::min(rec.svd->s_c.size(), s_a.size());
          double ww = 0.0, wc = 0.0;
          std::vector<double> wv(nn, 0.0);
          for (std::size_t i = 0; i < nn && static_cast<int>(i) < rank &&
                                  i < s.mark_s.size(); ++i)
            wv[i] = rec.alpha * s.mark_s[i];
          for (std::size_t i = 0; i < nn; ++i) {
            ww += wv[i] * wv[i];
            wc += wv[i] * rec.svd->s_c[i];
          }
          double num = 0.0, den = 0.0;
          for (std::size_t i = 0; i < nn; ++i) {
            double proj = rec.svd->s_c[i] - (ww > 0.0 ? wv[i] * wc / ww : 0.0);
            num += s_a[i] * proj;
            den += rec.svd->s_c[i] * proj;
          }
          double gain = 1.0;
          if (den > 1e-12) {
            double k = num / den;
            if (k >= 0.72 && k <= 1.32) gain = k;
          }
          std::vector<double> s_w(rank, 0.0);
          if (rec.alpha > 0.0)
            for (int i = 0; i < rank; ++i)
              s_w[i] = (s_a[i] / gain - rec.svd->s_c[i]) / rec.alpha;
          Matrix recovered = low_rank(s.mark_u, s.mark_v, s_w);
          ncs.push_back(nc_block(fps.marks[u], recovered));
        }
      }
      if (ncs.empty()) raise(Errc::SideInfoMismatch, "side info carries no payload blocks");
      out.per_user_nc[u] = nc_overall(ncs);
    }
  } else {
    for (std::size_t u = 0; u < sides.size(); ++u) {
      ExtractResult res = extract_document(colluded_pages, sides[u], fps.marks[u]);
      out.per_user_nc[u] = res.report.overall;
    }
  }

  for (std::size_t u = 0; u < out.per_user_nc.size(); ++u)
    if (out.per_user_nc[u] > threshold) out.flagged.push_back(static_cast<int>(u));
  return out;
}

}  // namespace docwm
