#pragma once

#include <array>
#include <vector>

#include "docwm/image.hpp"

namespace docwm {

/// Orthonormal type-II 2-D DCT and its inverse.
Matrix dct2(const Matrix& tile);
Matrix idct2(const Matrix& coeffs);

enum class Subband { LL = 0, LH = 1, HL = 2, HH = 3 };

/// Multi-level 2-D wavelet decomposition. Detail bands are kept per level
/// (index 0 = first/finest level); the LL band is kept for the deepest
/// level only. Orthonormal Haar, so energy is preserved exactly.
struct Subbands {
  int levels = 0;
  Matrix ll;                              // deepest approximation
  std::vector<std::array<Matrix, 3>> detail;  // per level: {LH, HL, HH}

  Matrix& band(int level, Subband b);
  const Matrix& band(int level, Subband b) const;
};

Subbands dwt2(const Matrix& tile, int levels);
Matrix idwt2(const Subbands& bands);

/// Economy SVD: A = U * diag(S) * V^T with S sorted descending.
struct SvdTriple {
  Matrix u;               // m x k
  std::vector<double> s;  // k, non-increasing, >= 0
  Matrix v;               // n x k
};

SvdTriple svd(const Matrix& m);

/// U * diag(s') * V^T with the leading singular values replaced by s_new.
Matrix svd_compose(const SvdTriple& t, const std::vector<double>& s_new);

/// Leading-column reconstruction U(:,0..k) * diag(s) * V(:,0..k)^T.
Matrix low_rank(const Matrix& u, const Matrix& v, const std::vector<double>& s);

/// Per-level, per-orientation embedding weights for the wavelet watermarker.
struct WeightTable {
  std::vector<std::array<double, 4>> w;  // [level][subband], level 0 = finest

  double at(int level, Subband b) const { return w[level][static_cast<int>(b)]; }
};

/// All-ones table unless a custom one is supplied; weights must be > 0.
WeightTable weight_factors(int levels);
WeightTable weight_factors(const WeightTable& custom);

}  // namespace docwm
