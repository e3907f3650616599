#include "docwm/watermark.hpp"

#include "docwm/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace docwm {
namespace {

// Zig-zag scan order of an n x n tile: returns (row, col) pairs indexed by
// zig-zag position.
std::vector<std::pair<int, int>> zigzag_order(int n) {
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<std::size_t>(n) * n);
  for (int s = 0; s <= 2 * (n - 1); ++s) {
    if (s % 2 == 0) {
      for (int r = std::min(s, n - 1); r >= std::max(0, s - n + 1); --r)
        order.emplace_back(r, s - r);
    } else {
      for (int r = std::max(0, s - n + 1); r <= std::min(s, n - 1); ++r)
        order.emplace_back(r, s - r);
    }
  }
  return order;
}

Matrix& host_band(Subbands& b, int idx) {
  if (idx == 0) return b.ll;
  return b.detail[b.levels - 1][idx - 1];
}

const Matrix& mark_band(const Subbands& b, int idx) {
  if (idx == 0) return b.ll;
  return b.detail[0][idx - 1];
}

std::vector<double> shifted_spectrum(const std::vector<double>& s_w, double alpha, int rank) {
  int k = std::min<int>(rank, static_cast<int>(s_w.size()));
  std::vector<double> delta(k);
  for (int i = 0; i < k; ++i) delta[i] = alpha * s_w[i];
  return delta;
}

// Attacks such as compression and rescaling attenuate the whole spectrum;
// estimate that gain so the shift formula sees only the deviation. The fit
// runs on the component of the stored spectrum orthogonal to the mark's
// spectrum, which makes it exact whether or not the mark is present: both
// an untouched and a uniformly attenuated spectrum recover gain k with no
// mark-induced bias.
double spectral_gain(const std::vector<double>& s_a, const std::vector<double>& s_c,
                     const std::vector<double>& s_w, double alpha, int rank) {
  std::size_t n = std::min(s_a.size(), s_c.size());
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n && static_cast<int>(i) < rank && i < s_w.size(); ++i)
    w[i] = alpha * s_w[i];
  double ww = 0.0, wc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ww += w[i] * w[i];
    wc += w[i] * s_c[i];
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double proj = s_c[i] - (ww > 0.0 ? w[i] * wc / ww : 0.0);
    num += s_a[i] * proj;
    den += s_c[i] * proj;
  }
  if (den <= 1e-12) return 1.0;
  double k = num / den;
  // the model covers mild uniform attenuation (compression, resampling
  // blur); a spectrum scaled far outside that band means the block content
  // itself changed, and compensating would only hallucinate structure
  if (k < 0.72 || k > 1.32) return 1.0;
  return k;
}

Matrix reconstruct_mark(const Matrix& u, const Matrix& v, const std::vector<double>& s) {
  return low_rank(u, v, s);
}

}  // namespace

AlgoId algo_from_int(int v) {
  if (v < 1 || v > 5) raise(Errc::ConfigError, "algo must be 1..5");
  return static_cast<AlgoId>(v);
}

const char* algo_name(AlgoId a) {
  switch (a) {
    case AlgoId::Dwt: return "algo1-dwt";
    case AlgoId::Svd: return "algo2-svd";
    case AlgoId::Dct: return "algo3-dct";
    case AlgoId::DwtSvd: return "algo4-dwt-svd";
    case AlgoId::DwtDctSvd: return "algo5-dwt-dct-svd";
  }
  return "?";
}

namespace {

// keep only the numerically nonzero part of the mark's decomposition so
// extraction never reconstructs noise along null directions
void trim_rank(SvdTriple& t) {
  int r = 0;
  while (r < static_cast<int>(t.s.size()) && t.s[r] > 1e-9 * std::max(t.s[0], 1.0)) ++r;
  r = std::max(r, 1);
  t.s.resize(r);
  Matrix u(t.u.rows, r), v(t.v.rows, r);
  for (int i = 0; i < t.u.rows; ++i)
    for (int j = 0; j < r; ++j) u.at(i, j) = t.u.at(i, j);
  for (int i = 0; i < t.v.rows; ++i)
    for (int j = 0; j < r; ++j) v.at(i, j) = t.v.at(i, j);
  t.u = std::move(u);
  t.v = std::move(v);
}

}  // namespace

MarkData prepare_mark(const WatermarkBits& w, const AlgoParams& p) {
  if (w.side < 2 || w.side % 2 != 0) raise(Errc::DimensionMismatch, "mark side must be even");
  MarkData m;
  m.side = w.side;
  m.img = watermark_matrix(w, p.mark_amplitude);
  m.msvd = svd(m.img);
  trim_rank(m.msvd);
  m.sub = dwt2(m.img, 1);
  for (int t = 0; t < 4; ++t) {
    m.subsvd[t] = svd(mark_band(m.sub, t));
    trim_rank(m.subsvd[t]);
  }
  return m;
}

// ---- Algo 1: additive embedding in the deepest wavelet subbands ----

PageImage embed_dwt(const PageImage& block, const MarkData& mark, double alpha,
                    const AlgoParams& p, PayloadDwt& payload) {
  const int levels = p.dwt_levels;
  if (block.width != block.height || block.channels != 1)
    raise(Errc::DimensionMismatch, "embed_dwt expects a square gray block");
  Matrix m = to_matrix(block);
  Subbands bands = dwt2(m, levels);
  int band_side = block.width >> levels;
  int sub_side = mark.side / 2;
  if (sub_side > band_side)
    raise(Errc::DimensionMismatch, "mark subbands exceed host subband size");

  payload.ll = bands.ll;
  payload.lh = bands.detail[levels - 1][0];
  payload.hl = bands.detail[levels - 1][1];
  payload.hh = bands.detail[levels - 1][2];
  if (alpha == 0.0) return block;

  for (int t = 0; t < 4; ++t) {
    Matrix& host = host_band(bands, t);
    const Matrix& wsub = mark_band(mark.sub, t);
    double wgt = p.weights.at(levels - 1, static_cast<Subband>(t));
    for (int r = 0; r < sub_side; ++r)
      for (int c = 0; c < sub_side; ++c) host.at(r, c) += alpha * wgt * wsub.at(r, c);
  }
  return to_page(idwt2(bands));
}

Matrix extract_dwt(const PageImage& suspect, const PayloadDwt& payload, double alpha,
                   const AlgoParams& p) {
  (void)alpha;  // the difference carries alpha; correlation is scale-free
  const int levels = p.dwt_levels;
  if (suspect.width != suspect.height || suspect.channels != 1)
    raise(Errc::PayloadMismatch, "suspect block must be square gray");
  int band_side = suspect.width >> levels;
  if (payload.ll.rows != band_side || payload.ll.cols != band_side ||
      payload.lh.rows != band_side || payload.hl.rows != band_side ||
      payload.hh.rows != band_side)
    raise(Errc::PayloadMismatch, "payload subband dims disagree with suspect block");

  Subbands bands = dwt2(to_matrix(suspect), levels);
  int sub_side = band_side / 2;  // recover a (2*sub_side)^2 mark
  const int win = std::max(1, p.distortion_window);
  const int rad = win / 2;
  const double two_l = static_cast<double>(1 << levels);

  std::array<Matrix, 4> est;
  const Matrix* orig[4] = {&payload.ll, &payload.lh, &payload.hl, &payload.hh};
  for (int t = 0; t < 4; ++t) {
    const Matrix& now = t == 0 ? bands.ll : bands.detail[levels - 1][t - 1];
    Matrix diff(band_side, band_side);
    for (int r = 0; r < band_side; ++r)
      for (int c = 0; c < band_side; ++c) diff.at(r, c) = now.at(r, c) - orig[t]->at(r, c);

    double wgt = p.weights.at(levels - 1, static_cast<Subband>(t));
    // per-coefficient estimate and its distortion-derived weight; with a
    // single embedding level the normalization cancels, matching the
    // accumulation formula it implements
    Matrix acc(sub_side, sub_side, 0.0), wsum(sub_side, sub_side, 0.0);
    for (int r = 0; r < sub_side; ++r) {
      for (int c = 0; c < sub_side; ++c) {
        double d = 0.0;
        int cnt = 0;
        for (int dr = -rad; dr <= rad; ++dr) {
          for (int dc = -rad; dc <= rad; ++dc) {
            int rr = r + dr, cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= band_side || cc >= band_side) continue;
            d += diff.at(rr, cc) * diff.at(rr, cc);
            ++cnt;
          }
        }
        d = std::max(d / cnt, 1e-12);
        double k = (wgt * two_l / std::sqrt(d));
        k *= k;
        acc.at(r, c) += (diff.at(r, c) / wgt) * k;
        wsum.at(r, c) += k;
      }
    }
    est[t] = Matrix(sub_side, sub_side);
    for (int r = 0; r < sub_side; ++r)
      for (int c = 0; c < sub_side; ++c) est[t].at(r, c) = acc.at(r, c) / wsum.at(r, c);
  }

  Subbands mark_bands;
  mark_bands.levels = 1;
  mark_bands.ll = std::move(est[0]);
  mark_bands.detail.push_back({std::move(est[1]), std::move(est[2]), std::move(est[3])});
  return idwt2(mark_bands);
}

// ---- Algo 2: singular-value shifting of the whole block ----

PageImage embed_svd_block(const PageImage& block, const MarkData& mark, double alpha,
                          const AlgoParams& p, PayloadSvd& payload) {
  if (block.width != block.height || block.channels != 1)
    raise(Errc::DimensionMismatch, "embed_svd expects a square gray block");
  Matrix m = to_matrix(block);
  SvdTriple t = svd(m);
  payload.s_c = t.s;
  if (alpha == 0.0) return block;

  auto delta = shifted_spectrum(mark.msvd.s, alpha, p.svd_rank);
  Matrix d = svd_compose(t, delta);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] += d.a[i];
  return to_page(m);
}

Matrix extract_svd_block(const PageImage& suspect, const PayloadSvd& payload,
                         const Matrix& mark_u, const Matrix& mark_v,
                         const std::vector<double>& mark_s, double alpha,
                         const AlgoParams& p) {
  if (suspect.width != suspect.height || suspect.channels != 1)
    raise(Errc::PayloadMismatch, "suspect block must be square gray");
  if (payload.s_c.size() != static_cast<std::size_t>(suspect.width))
    raise(Errc::PayloadMismatch, "stored spectrum length disagrees with block side");
  SvdTriple t = svd(to_matrix(suspect));
  int rank = std::min<int>({p.svd_rank, mark_u.cols, static_cast<int>(payload.s_c.size())});
  double gain = spectral_gain(t.s, payload.s_c, mark_s, alpha, rank);
  std::vector<double> s_w(rank, 0.0);
  if (alpha > 0.0)
    for (int i = 0; i < rank; ++i) s_w[i] = (t.s[i] / gain - payload.s_c[i]) / alpha;
  return reconstruct_mark(mark_u, mark_v, s_w);
}

// ---- Algo 3: multiplicative embedding in the largest AC coefficients ----

PageImage embed_dct(const PageImage& block, const WatermarkBits& w, double alpha,
                    const AlgoParams& p, PayloadDct& payload) {
  if (block.width != block.height || block.channels != 1)
    raise(Errc::DimensionMismatch, "embed_dct expects a square gray block");
  const int n = block.width;
  const int want = p.dct_coeffs;
  if (static_cast<int>(w.bits.size()) != want)
    raise(Errc::DimensionMismatch, "mark bit count must equal the embedded coefficient count");

  Matrix coeffs = dct2(to_matrix(block));
  auto order = zigzag_order(n);

  // pick the `want` largest-|v| nonzero AC coefficients (an exact-constant
  // block leaves only rounding dust in the AC plane)
  std::vector<int> idx;  // zig-zag positions, DC excluded
  idx.reserve(order.size() - 1);
  for (int z = 1; z < static_cast<int>(order.size()); ++z)
    if (std::abs(coeffs.at(order[z].first, order[z].second)) > 1e-6) idx.push_back(z);
  if (static_cast<int>(idx.size()) < want)
    raise(Errc::InsufficientAC, "block has fewer than " + std::to_string(want) +
                                    " nonzero AC coefficients");
  std::nth_element(idx.begin(), idx.begin() + want, idx.end(), [&](int a, int b) {
    double va = std::abs(coeffs.at(order[a].first, order[a].second));
    double vb = std::abs(coeffs.at(order[b].first, order[b].second));
    if (va != vb) return va > vb;
    return a < b;  // deterministic tie break
  });
  idx.resize(want);
  std::sort(idx.begin(), idx.end());  // bits assigned in zig-zag order

  payload.positions = idx;
  payload.values.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    payload.values[i] = coeffs.at(order[idx[i]].first, order[idx[i]].second);
  if (alpha == 0.0) return block;

  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto [r, c] = order[idx[i]];
    coeffs.at(r, c) = payload.values[i] * (1.0 + alpha * w.bits[i]);
  }
  return to_page(idct2(coeffs));
}

Matrix extract_dct(const PageImage& suspect, const PayloadDct& payload, double alpha,
                   const AlgoParams& p, int mark_side) {
  if (suspect.width != suspect.height || suspect.channels != 1)
    raise(Errc::PayloadMismatch, "suspect block must be square gray");
  if (payload.positions.size() != payload.values.size() ||
      payload.positions.size() != static_cast<std::size_t>(mark_side) * mark_side)
    raise(Errc::PayloadMismatch, "payload size disagrees with mark dimensions");
  Matrix coeffs = dct2(to_matrix(suspect));
  auto order = zigzag_order(suspect.width);

  Matrix out(mark_side, mark_side, 0.0);
  for (std::size_t i = 0; i < payload.positions.size(); ++i) {
    int z = payload.positions[i];
    if (z < 1 || z >= static_cast<int>(order.size()))
      raise(Errc::PayloadMismatch, "zig-zag position out of range");
    double v0 = payload.values[i];
    double v2 = coeffs.at(order[z].first, order[z].second);
    double west = alpha > 0.0 ? std::abs(v2 - v0) / alpha : 0.0;
    out.a[i] = west > p.dct_tolerance * std::abs(v0) ? 255.0 : 0.0;
  }
  return out;
}

// ---- Algos 4 and 5: singular-value shifting per wavelet subband ----

PageImage embed_subband_svd(const PageImage& block, const MarkData& mark, double alpha,
                            const AlgoParams& p, bool with_dct, PayloadSubbandSvd& payload) {
  if (block.width != block.height || block.channels != 1)
    raise(Errc::DimensionMismatch, "embed expects a square gray block");
  Matrix m = to_matrix(block);
  Subbands bands = dwt2(m, 1);
  for (int t = 0; t < 4; ++t) {
    Matrix& band = t == 0 ? bands.ll : bands.detail[0][t - 1];
    Matrix host = with_dct ? dct2(band) : band;
    SvdTriple tr = svd(host);
    payload.s_cl[t] = tr.s;
    if (alpha == 0.0) continue;
    auto delta = shifted_spectrum(mark.subsvd[t].s, alpha, p.subband_rank);
    Matrix d = svd_compose(tr, delta);
    for (std::size_t i = 0; i < host.a.size(); ++i) host.a[i] += d.a[i];
    band = with_dct ? idct2(host) : std::move(host);
  }
  if (alpha == 0.0) return block;
  return to_page(idwt2(bands));
}

Matrix extract_subband_svd(const PageImage& suspect, const PayloadSubbandSvd& payload,
                           const std::array<Matrix, 4>& mark_sub_u,
                           const std::array<Matrix, 4>& mark_sub_v,
                           const std::array<std::vector<double>, 4>& mark_sub_s, double alpha,
                           const AlgoParams& p, bool with_dct, int mark_side) {
  if (suspect.width != suspect.height || suspect.channels != 1)
    raise(Errc::PayloadMismatch, "suspect block must be square gray");
  Subbands bands = dwt2(to_matrix(suspect), 1);
  int sub_side = mark_side / 2;

  std::array<Matrix, 4> est;
  for (int t = 0; t < 4; ++t) {
    const Matrix& band = t == 0 ? bands.ll : bands.detail[0][t - 1];
    if (payload.s_cl[t].size() != static_cast<std::size_t>(band.rows))
      raise(Errc::PayloadMismatch, "stored spectrum length disagrees with subband side");
    Matrix host = with_dct ? dct2(band) : band;
    SvdTriple tr = svd(host);
    int rank = std::min<int>({p.subband_rank, mark_sub_u[t].cols,
                              static_cast<int>(payload.s_cl[t].size())});
    double gain = spectral_gain(tr.s, payload.s_cl[t], mark_sub_s[t], alpha, rank);
    std::vector<double> s_w(rank, 0.0);
    if (alpha > 0.0)
      for (int i = 0; i < rank; ++i) s_w[i] = (tr.s[i] / gain - payload.s_cl[t][i]) / alpha;
    est[t] = reconstruct_mark(mark_sub_u[t], mark_sub_v[t], s_w);
    if (est[t].rows != sub_side || est[t].cols != sub_side)
      raise(Errc::PayloadMismatch, "mark subband factors disagree with mark side");
  }

  Subbands mark_bands;
  mark_bands.levels = 1;
  mark_bands.ll = std::move(est[0]);
  mark_bands.detail.push_back({std::move(est[1]), std::move(est[2]), std::move(est[3])});
  return idwt2(mark_bands);
}

// ---- document pipeline ----

void PipelineConfig::validate() const {
  thresholds.validate();
  int side = block_side();
  if (canon_w < side || canon_h < side || canon_w % side != 0 || canon_h % side != 0)
    raise(Errc::InvalidCanonicalDims, "canonical dims must be positive multiples of " +
                                          std::to_string(side));
  if (params.dwt_levels < 1 || (side >> params.dwt_levels) < 1)
    raise(Errc::ConfigError, "dwt levels out of range for block side");
  if (static_cast<int>(params.weights.w.size()) < params.dwt_levels)
    raise(Errc::ConfigError, "weight table smaller than decomposition depth");
  weight_factors(params.weights);  // positivity check
  if (params.mark_amplitude <= 0.0) raise(Errc::ConfigError, "mark amplitude must be positive");
  double alphas[] = {policy.ct, policy.ptpg, policy.cg};
  for (double a : alphas)
    if (a < 0.0 || a > 1.0) raise(Errc::ConfigError, "alpha values must lie in [0,1]");
}

namespace {

std::vector<double> axis_profile(const PageImage& gray, bool columns) {
  int n = columns ? gray.width : gray.height;
  int m = columns ? gray.height : gray.width;
  std::vector<double> p(n, 0.0);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) p[columns ? x : y] += gray.at(x, y);
  for (auto& v : p) v /= m;
  return p;
}

// linear resample of a 1-D profile, corner-aligned like resize_bilinear
std::vector<double> resample_profile(const std::vector<double>& p, int out_n) {
  if (static_cast<int>(p.size()) == out_n) return p;
  std::vector<double> out(out_n);
  double s = out_n > 1 ? static_cast<double>(p.size() - 1) / (out_n - 1) : 0.0;
  for (int i = 0; i < out_n; ++i) {
    double f = i * s;
    int i0 = static_cast<int>(f);
    int i1 = std::min<int>(i0 + 1, static_cast<int>(p.size()) - 1);
    double w = f - i0;
    out[i] = (1 - w) * p[i0] + w * p[i1];
  }
  return out;
}

double profile_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (double v : a) ma += v;
  for (double v : b) mb += v;
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double e = (a[i] - ma) - (b[i] - mb);
    d += e * e;
  }
  return d;
}

// Snap detected margins to the stored canonical profiles. Margin drift of
// a few pixels under attacks would otherwise shear every block at once.
// When the suspect still has the original page geometry, the embed-time
// margins join the candidate set.
Margins refine_margins(const PageImage& luma, Margins m, const PageSideInfo& psi,
                       const SideInfo& side) {
  if (psi.col_profile.empty() || psi.row_profile.empty()) return m;
  constexpr int radius = 4;
  const bool same_dims = luma.width == psi.orig_width && luma.height == psi.orig_height;

  for (int pass = 0; pass < 4; ++pass) {
    bool columns = (pass % 2) == 0;
    int lo0 = columns ? m.left : m.top;
    int hi0 = columns ? m.right : m.bottom;
    int extent = columns ? luma.width : luma.height;
    const std::vector<double>& want = columns ? psi.col_profile : psi.row_profile;
    int canon_n = columns ? side.canon_w : side.canon_h;

    // mean along the fixed axis inside the current crop band
    std::vector<double> full(extent, 0.0);
    int band_lo = columns ? m.top : m.left;
    int band_hi = columns ? luma.height - m.bottom : luma.width - m.right;
    if (band_hi <= band_lo) return m;
    for (int s = band_lo; s < band_hi; ++s)
      for (int t = 0; t < extent; ++t)
        full[t] += columns ? luma.at(t, s) : luma.at(s, t);
    for (auto& v : full) v /= static_cast<double>(band_hi - band_lo);

    double best = -1.0;
    int best_lo = lo0, best_hi = hi0;
    auto consider = [&](int lo, int hi) {
      if (lo < 0 || hi < 0 || extent - lo - hi < 16) return;
      std::vector<double> cand(full.begin() + lo, full.end() - hi);
      double d = profile_distance(resample_profile(cand, canon_n), want);
      if (best < 0 || d < best) {
        best = d;
        best_lo = lo;
        best_hi = hi;
      }
    };
    for (int dlo = -radius; dlo <= radius; ++dlo)
      for (int dhi = -radius; dhi <= radius; ++dhi) consider(lo0 + dlo, hi0 + dhi);
    if (same_dims) {
      if (columns)
        consider(psi.margins.left, psi.margins.right);
      else
        consider(psi.margins.top, psi.margins.bottom);
    }
    if (columns) {
      m.left = best_lo;
      m.right = best_hi;
    } else {
      m.top = best_lo;
      m.bottom = best_hi;
    }
  }
  return m;
}

PageImage embed_block_dispatch(const PageImage& tile, const WatermarkBits& w,
                               const MarkData& mark, double alpha, const PipelineConfig& cfg,
                               BlockRecord& rec) {
  switch (cfg.algo) {
    case AlgoId::Dwt: {
      rec.dwt.emplace();
      return embed_dwt(tile, mark, alpha, cfg.params, *rec.dwt);
    }
    case AlgoId::Svd: {
      rec.svd.emplace();
      return embed_svd_block(tile, mark, alpha, cfg.params, *rec.svd);
    }
    case AlgoId::Dct: {
      rec.dct.emplace();
      return embed_dct(tile, w, alpha, cfg.params, *rec.dct);
    }
    case AlgoId::DwtSvd: {
      rec.sub_svd.emplace();
      return embed_subband_svd(tile, mark, alpha, cfg.params, false, *rec.sub_svd);
    }
    case AlgoId::DwtDctSvd: {
      rec.sub_svd.emplace();
      return embed_subband_svd(tile, mark, alpha, cfg.params, true, *rec.sub_svd);
    }
  }
  raise(Errc::ConfigError, "unknown algorithm");
}

Margins robust_margins(const PageImage& luma, double eps_base, Matrix* grad_out) {
  Matrix grad = sobel_magnitude(luma);
  // raise the threshold above the page's own gradient noise floor so
  // noise-like attacks cannot pull the margins to the page border
  std::vector<double> mags = grad.a;
  auto mid = mags.begin() + mags.size() / 2;
  std::nth_element(mags.begin(), mid, mags.end());
  double eps = std::max(eps_base, 5.0 * *mid);
  Margins m = detect_margins(grad, eps);
  if (grad_out) *grad_out = std::move(grad);
  return m;
}

void apply_luma_delta(PageImage& page, const PageImage& orig_luma_crop,
                      const PageImage& new_luma_crop, const Margins& m) {
  for (int y = 0; y < new_luma_crop.height; ++y) {
    for (int x = 0; x < new_luma_crop.width; ++x) {
      int delta = static_cast<int>(new_luma_crop.at(x, y)) - orig_luma_crop.at(x, y);
      if (delta == 0) continue;
      for (int c = 0; c < page.channels; ++c) {
        int v = page.at(x + m.left, y + m.top, c) + delta;
        page.at(x + m.left, y + m.top, c) =
            static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      }
    }
  }
}

}  // namespace

EmbedResult embed_document(const std::vector<PageImage>& pages, const WatermarkBits& w,
                           const PipelineConfig& cfg) {
  cfg.validate();
  if (pages.empty()) raise(Errc::ConfigError, "document has no pages");
  const int side_len = cfg.block_side();
  MarkData mark = prepare_mark(w, cfg.params);

  EmbedResult out;
  out.side.algo = cfg.algo;
  out.side.block_side = side_len;
  out.side.canon_w = cfg.canon_w;
  out.side.canon_h = cfg.canon_h;
  out.side.mark_side = w.side;
  out.side.margin_eps = cfg.margin_eps;
  out.side.auto_deskew = cfg.auto_deskew;
  out.side.thresholds = cfg.thresholds;
  out.side.policy = cfg.policy;
  out.side.params = cfg.params;
  out.side.mark_u = mark.msvd.u;
  out.side.mark_v = mark.msvd.v;
  out.side.mark_s = mark.msvd.s;
  for (int t = 0; t < 4; ++t) {
    out.side.mark_sub_u[t] = mark.subsvd[t].u;
    out.side.mark_sub_v[t] = mark.subsvd[t].v;
    out.side.mark_sub_s[t] = mark.subsvd[t].s;
  }

  for (std::size_t pi = 0; pi < pages.size(); ++pi) {
    const PageImage& page = pages[pi];
    PageSideInfo psi;
    psi.page_index = static_cast<int>(pi);
    psi.orig_width = page.width;
    psi.orig_height = page.height;

    PageImage luma = to_luma(page);
    Margins margins;
    try {
      margins = robust_margins(luma, cfg.margin_eps, nullptr);
    } catch (const Error& e) {
      if (e.code() != Errc::NoContent) throw;
      psi.blank = true;  // degenerate blank page: emitted unchanged
      out.side.pages.push_back(std::move(psi));
      out.pages.push_back(page);
      continue;
    }
    psi.margins = margins;

    PageImage cropped = crop(luma, margins);
    psi.crop_width = cropped.width;
    psi.crop_height = cropped.height;
    PageImage canon = normalize_size(cropped, cfg.canon_w, cfg.canon_h, side_len);
    BlockGrid grid = segment(canon, side_len, side_len);

    for (int bi = 0; bi < grid.count(); ++bi) {
      BlockRecord rec;
      rec.index = bi;
      rec.cls = classify_energy(grid.blocks[bi], cfg.thresholds);
      rec.alpha = cfg.policy.alpha_for(rec.cls);
      if (is_texture(rec.cls) && rec.alpha > 0.0) {
        grid.blocks[bi] = embed_block_dispatch(grid.blocks[bi], w, mark, rec.alpha, cfg, rec);
        ++out.texture_blocks;
      }
      psi.blocks.push_back(std::move(rec));
    }

    PageImage wm_canon = reassemble(grid);
    psi.col_profile = axis_profile(wm_canon, true);
    psi.row_profile = axis_profile(wm_canon, false);
    PageImage wm_crop = (wm_canon.width == cropped.width && wm_canon.height == cropped.height)
                            ? std::move(wm_canon)
                            : resize_bilinear(wm_canon, cropped.width, cropped.height);
    PageImage out_page = page;
    apply_luma_delta(out_page, cropped, wm_crop, margins);
    out.pages.push_back(std::move(out_page));
    out.side.pages.push_back(std::move(psi));
  }

  if (out.texture_blocks == 0)
    raise(Errc::NoTextureBlocks, "document has no embeddable texture blocks");
  return out;
}

namespace {

Matrix extract_block_dispatch(const PageImage& tile, const BlockRecord& rec,
                              const SideInfo& side) {
  switch (side.algo) {
    case AlgoId::Dwt:
      if (!rec.dwt) raise(Errc::SideInfoMismatch, "payload type disagrees with algorithm");
      return extract_dwt(tile, *rec.dwt, rec.alpha, side.params);
    case AlgoId::Svd:
      if (!rec.svd) raise(Errc::SideInfoMismatch, "payload type disagrees with algorithm");
      return extract_svd_block(tile, *rec.svd, side.mark_u, side.mark_v, side.mark_s,
                               rec.alpha, side.params);
    case AlgoId::Dct:
      if (!rec.dct) raise(Errc::SideInfoMismatch, "payload type disagrees with algorithm");
      return extract_dct(tile, *rec.dct, rec.alpha, side.params, side.mark_side);
    case AlgoId::DwtSvd:
      if (!rec.sub_svd) raise(Errc::SideInfoMismatch, "payload type disagrees with algorithm");
      return extract_subband_svd(tile, *rec.sub_svd, side.mark_sub_u, side.mark_sub_v,
                                 side.mark_sub_s, rec.alpha, side.params, false, side.mark_side);
    case AlgoId::DwtDctSvd:
      if (!rec.sub_svd) raise(Errc::SideInfoMismatch, "payload type disagrees with algorithm");
      return extract_subband_svd(tile, *rec.sub_svd, side.mark_sub_u, side.mark_sub_v,
                                 side.mark_sub_s, rec.alpha, side.params, true, side.mark_side);
  }
  raise(Errc::SideInfoMismatch, "unknown algorithm");
}

}  // namespace

PageImage locate_canonical_page(const PageImage& page, const SideInfo& side, int page_index) {
  if (page_index < 0 || page_index >= static_cast<int>(side.pages.size()))
    raise(Errc::SideInfoMismatch, "page index outside side info");
  PageImage luma = to_luma(page);
  if (side.auto_deskew) {
    try {
      double est = detect_skew(luma);
      if (std::abs(est) > 0.1) luma = rotate(luma, -est);
    } catch (const Error& e) {
      if (e.code() != Errc::NoContent) throw;  // blank: fall through to margins
    }
  }
  Margins margins = robust_margins(luma, side.margin_eps, nullptr);
  margins = refine_margins(luma, margins, side.pages[page_index], side);
  return normalize_size(crop(luma, margins), side.canon_w, side.canon_h, side.block_side);
}

ExtractResult extract_document(const std::vector<PageImage>& suspect_pages, const SideInfo& side,
                               const WatermarkBits& w) {
  if (w.side != side.mark_side)
    raise(Errc::SideInfoMismatch, "watermark side disagrees with side info");
  if (suspect_pages.size() != side.pages.size())
    raise(Errc::SideInfoMismatch, "page count disagrees with side info");
  if (side.canon_w % side.block_side != 0 || side.canon_h % side.block_side != 0)
    raise(Errc::SideInfoMismatch, "canonical dims not divisible by block side");
  if (algo_block_side(side.algo) != side.block_side)
    raise(Errc::SideInfoMismatch, "block side disagrees with algorithm");

  ExtractResult out;
  for (std::size_t pi = 0; pi < suspect_pages.size(); ++pi) {
    const PageSideInfo& psi = side.pages[pi];
    if (psi.blank) continue;

    bool no_content = false;
    BlockGrid grid;
    try {
      PageImage canon = locate_canonical_page(suspect_pages[pi], side, static_cast<int>(pi));
      grid = segment(canon, side.block_side, side.block_side);
      auto classes = classify_grid(grid, side.thresholds);
      out.suspect_classes.insert(out.suspect_classes.end(), classes.begin(), classes.end());
    } catch (const Error& e) {
      if (e.code() != Errc::NoContent) throw;
      no_content = true;  // mark destroyed with the content; blocks score 0
    }

    for (const BlockRecord& rec : psi.blocks) {
      if (!rec.has_payload()) continue;
      ExtractedMark em;
      em.page_index = static_cast<int>(pi);
      em.block_index = rec.index;
      if (no_content) {
        em.recovered = Matrix(side.mark_side, side.mark_side, 0.0);
      } else {
        if (rec.index < 0 || rec.index >= grid.count())
          raise(Errc::SideInfoMismatch, "block index outside suspect grid");
        em.recovered = extract_block_dispatch(grid.blocks[rec.index], rec, side);
      }
      out.report.nc_blocks.push_back(nc_block(w, em.recovered));
      out.marks.push_back(std::move(em));
    }
  }

  out.report.texture_blocks = static_cast<int>(out.marks.size());
  if (out.report.nc_blocks.empty())
    raise(Errc::SideInfoMismatch, "side info carries no payload blocks");
  out.report.overall = nc_overall(out.report.nc_blocks);
  return out;
}

}  // namespace docwm
