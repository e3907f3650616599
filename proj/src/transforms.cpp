#include "docwm/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace docwm {
namespace {

// Orthonormal DCT-II basis matrix for size n, cached per size.
const Matrix& dct_basis(int n) {
  static std::mutex mu;
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Matrix c(n, n);
  double s0 = std::sqrt(1.0 / n);
  double sk = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      c.at(k, j) = (k == 0 ? s0 : sk) * std::cos(std::numbers::pi * (2 * j + 1) * k / (2.0 * n));
  return cache.emplace(n, std::move(c)).first->second;
}

// One level of the orthonormal Haar transform along both axes.
void haar_step(const Matrix& x, Matrix& ll, Matrix& lh, Matrix& hl, Matrix& hh) {
  const int hr = x.rows / 2, hc = x.cols / 2;
  static const double inv2 = 0.5;
  ll = Matrix(hr, hc);
  lh = Matrix(hr, hc);
  hl = Matrix(hr, hc);
  hh = Matrix(hr, hc);
  for (int r = 0; r < hr; ++r) {
    for (int c = 0; c < hc; ++c) {
      double a = x.at(2 * r, 2 * c);
      double b = x.at(2 * r, 2 * c + 1);
      double d = x.at(2 * r + 1, 2 * c);
      double e = x.at(2 * r + 1, 2 * c + 1);
      ll.at(r, c) = (a + b + d + e) * inv2;
      lh.at(r, c) = (a - b + d - e) * inv2;  // horizontal detail
      hl.at(r, c) = (a + b - d - e) * inv2;  // vertical detail
      hh.at(r, c) = (a - b - d + e) * inv2;
    }
  }
}

Matrix haar_unstep(const Matrix& ll, const Matrix& lh, const Matrix& hl, const Matrix& hh) {
  const int hr = ll.rows, hc = ll.cols;
  Matrix x(hr * 2, hc * 2);
  for (int r = 0; r < hr; ++r) {
    for (int c = 0; c < hc; ++c) {
      double a = ll.at(r, c), b = lh.at(r, c), d = hl.at(r, c), e = hh.at(r, c);
      x.at(2 * r, 2 * c) = (a + b + d + e) * 0.5;
      x.at(2 * r, 2 * c + 1) = (a - b + d - e) * 0.5;
      x.at(2 * r + 1, 2 * c) = (a + b - d - e) * 0.5;
      x.at(2 * r + 1, 2 * c + 1) = (a - b - d + e) * 0.5;
    }
  }
  return x;
}

}  // namespace

Matrix dct2(const Matrix& tile) {
  // C_r * X * C_c^T
  const Matrix& cr = dct_basis(tile.rows);
  const Matrix& cc = dct_basis(tile.cols);
  return matmul(matmul(cr, tile), cc.transposed());
}

Matrix idct2(const Matrix& coeffs) {
  const Matrix& cr = dct_basis(coeffs.rows);
  const Matrix& cc = dct_basis(coeffs.cols);
  return matmul(matmul(cr.transposed(), coeffs), cc);
}

Matrix& Subbands::band(int level, Subband b) {
  if (b == Subband::LL) {
    if (level != levels - 1) raise(Errc::PayloadMismatch, "LL kept at deepest level only");
    return ll;
  }
  return detail[level][static_cast<int>(b) - 1];
}

const Matrix& Subbands::band(int level, Subband b) const {
  return const_cast<Subbands*>(this)->band(level, b);
}

Subbands dwt2(const Matrix& tile, int levels) {
  if (levels < 1) raise(Errc::NonDyadicDims, "levels must be >= 1");
  int div = 1 << levels;
  if (tile.rows % div != 0 || tile.cols % div != 0 || tile.rows < div || tile.cols < div)
    raise(Errc::NonDyadicDims, "tile sides must be divisible by 2^levels");

  Subbands out;
  out.levels = levels;
  out.detail.resize(levels);
  Matrix cur = tile;
  for (int l = 0; l < levels; ++l) {
    Matrix ll, lh, hl, hh;
    haar_step(cur, ll, lh, hl, hh);
    out.detail[l] = {std::move(lh), std::move(hl), std::move(hh)};
    cur = std::move(ll);
  }
  out.ll = std::move(cur);
  return out;
}

Matrix idwt2(const Subbands& bands) {
  if (bands.levels < 1 || bands.detail.size() != static_cast<std::size_t>(bands.levels))
    raise(Errc::PayloadMismatch, "malformed subbands");
  Matrix cur = bands.ll;
  for (int l = bands.levels - 1; l >= 0; --l) {
    const auto& d = bands.detail[l];
    if (d[0].rows != cur.rows || d[0].cols != cur.cols)
      raise(Errc::PayloadMismatch, "subband dimensions disagree");
    cur = haar_unstep(cur, d[0], d[1], d[2]);
  }
  return cur;
}

// One-sided (Hestenes) Jacobi SVD. Works on columns of A, accumulating V;
// after convergence the column norms are the singular values. Chosen for
// determinism and componentwise accuracy; blocks here are at most 256x256.
SvdTriple svd(const Matrix& m) {
  if (m.rows < 1 || m.cols < 1) raise(Errc::DimensionMismatch, "svd of empty matrix");
  const bool transposed = m.rows < m.cols;
  Matrix work = transposed ? m : m.transposed();  // columns stored contiguously as rows
  // here `work` is k x n with k = min-dim... no: work rows index original columns.
  const int n = work.rows;   // number of columns of A
  const int mm = work.cols;  // length of each column

  Matrix v(n, n, 0.0);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

  std::vector<double> norms(n);
  auto colnorm2 = [&](int j) {
    const double* p = &work.a[static_cast<std::size_t>(j) * mm];
    return std::inner_product(p, p + mm, p, 0.0);
  };
  for (int j = 0; j < n; ++j) norms[j] = colnorm2(j);
  double total = std::accumulate(norms.begin(), norms.end(), 0.0);
  const double tol = 1e-15;

  const int max_sweeps = 60;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double* cp = &work.a[static_cast<std::size_t>(p) * mm];
        double* cq = &work.a[static_cast<std::size_t>(q) * mm];
        double dot = std::inner_product(cp, cp + mm, cq, 0.0);
        double app = norms[p], aqq = norms[q];
        if (std::abs(dot) <= tol * std::sqrt(app * aqq) || std::abs(dot) <= tol * total) continue;
        rotated = true;

        double tau = (aqq - app) / (2.0 * dot);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;

        for (int i = 0; i < mm; ++i) {
          double xp = cp[i], xq = cq[i];
          cp[i] = cs * xp - sn * xq;
          cq[i] = sn * xp + cs * xq;
        }
        double* vp = &v.a[static_cast<std::size_t>(p) * n];
        double* vq = &v.a[static_cast<std::size_t>(q) * n];
        for (int i = 0; i < n; ++i) {
          double xp = vp[i], xq = vq[i];
          vp[i] = cs * xp - sn * xq;
          vq[i] = sn * xp + cs * xq;
        }
        norms[p] = colnorm2(p);
        norms[q] = colnorm2(q);
      }
    }
    if (!rotated) break;
  }
  if (sweep == max_sweeps) raise(Errc::ConvergenceFailure, "jacobi sweep cap exceeded");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });

  SvdTriple out;
  out.s.resize(n);
  Matrix u_cols(n, mm);  // row j = j-th left singular vector
  Matrix v_sorted(n, n);
  const double rank_tol = 1e-13 * std::sqrt(std::max(total, 1.0));
  int null_from = n;
  for (int j = 0; j < n; ++j) {
    int src = order[j];
    double sigma = std::sqrt(std::max(norms[src], 0.0));
    out.s[j] = sigma;
    const double* cp = &work.a[static_cast<std::size_t>(src) * mm];
    double* up = &u_cols.a[static_cast<std::size_t>(j) * mm];
    if (sigma > rank_tol) {
      for (int i = 0; i < mm; ++i) up[i] = cp[i] / sigma;
    } else {
      out.s[j] = 0.0;
      if (null_from == n) null_from = j;
      std::fill(up, up + mm, 0.0);
    }
    const double* vp = &v.a[static_cast<std::size_t>(src) * n];
    double* vd = &v_sorted.a[static_cast<std::size_t>(j) * n];
    std::copy(vp, vp + n, vd);
  }

  // Deterministically complete U's null columns so composition with
  // modified singular values stays well defined on rank-deficient input.
  for (int j = null_from; j < n; ++j) {
    double* up = &u_cols.a[static_cast<std::size_t>(j) * mm];
    for (int e = 0; e < mm; ++e) {
      std::fill(up, up + mm, 0.0);
      up[e] = 1.0;
      for (int k = 0; k < j; ++k) {
        const double* uk = &u_cols.a[static_cast<std::size_t>(k) * mm];
        double d = std::inner_product(uk, uk + mm, up, 0.0);
        for (int i = 0; i < mm; ++i) up[i] -= d * uk[i];
      }
      double nrm = std::sqrt(std::inner_product(up, up + mm, up, 0.0));
      if (nrm > 0.5) {  // e_e was far enough from span of previous columns
        for (int i = 0; i < mm; ++i) up[i] /= nrm;
        break;
      }
    }
  }

  // Undo the internal layout: rows of u_cols / v_sorted are vectors.
  if (!transposed) {
    out.u = u_cols.transposed();
    out.v = v_sorted.transposed();
  } else {
    out.u = v_sorted.transposed();
    out.v = u_cols.transposed();
  }
  return out;
}

Matrix low_rank(const Matrix& u, const Matrix& v, const std::vector<double>& s) {
  int k = static_cast<int>(s.size());
  if (u.cols < k || v.cols < k) raise(Errc::DimensionMismatch, "rank exceeds factor columns");
  Matrix out(u.rows, v.rows, 0.0);
  for (int j = 0; j < k; ++j) {
    if (s[j] == 0.0) continue;
    for (int r = 0; r < out.rows; ++r) {
      double uv = u.at(r, j) * s[j];
      if (uv == 0.0) continue;
      for (int c = 0; c < out.cols; ++c) out.at(r, c) += uv * v.at(c, j);
    }
  }
  return out;
}

Matrix svd_compose(const SvdTriple& t, const std::vector<double>& s_new) {
  return low_rank(t.u, t.v, s_new);
}

WeightTable weight_factors(int levels) {
  if (levels < 1) raise(Errc::NonPositiveWeight, "levels must be >= 1");
  WeightTable t;
  t.w.assign(levels, {1.0, 1.0, 1.0, 1.0});
  return t;
}

WeightTable weight_factors(const WeightTable& custom) {
  if (custom.w.empty()) raise(Errc::NonPositiveWeight, "empty weight table");
  for (const auto& lvl : custom.w)
    for (double x : lvl)
      if (!(x > 0.0)) raise(Errc::NonPositiveWeight, "weights must be positive");
  return custom;
}

}  // namespace docwm
