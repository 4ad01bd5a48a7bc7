#ifndef MWALL_LINALG_HPP
#define MWALL_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mwall/errors.hpp"
#include "mwall/rational.hpp"

namespace mwall {

// Dense exact matrix, row-major. Sizes here are desk scale (<= ~20), so plain
// rational Gaussian elimination is both exact and fast enough.
using Mat = std::vector<RatVec>;

inline Mat make_mat(size_t r, size_t c) { return Mat(r, RatVec(c, Rat(0))); }

inline size_t rows(const Mat& m) { return m.size(); }
inline size_t cols(const Mat& m) { return m.empty() ? 0 : m[0].size(); }

inline RatVec mat_vec(const Mat& m, const RatVec& v) {
  if (cols(m) != v.size()) throw Error(ErrorCode::DimensionMismatch, "mat_vec size");
  RatVec out(rows(m), Rat(0));
  for (size_t i = 0; i < rows(m); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot size");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec vec_add(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vec_add size");
  RatVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RatVec vec_sub(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vec_sub size");
  RatVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline RatVec vec_scale(const Rat& c, const RatVec& a) {
  RatVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

// Row-reduce [A | rhs...] in place; returns pivot columns. Exact fractions.
inline std::vector<size_t> row_reduce(Mat& a) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols(a) && r < rows(a); ++c) {
    size_t p = r;
    while (p < rows(a) && a[p][c] == 0) ++p;
    if (p == rows(a)) continue;
    std::swap(a[p], a[r]);
    Rat inv = Rat(1) / a[r][c];
    for (size_t j = c; j < cols(a); ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows(a); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = c; j < cols(a); ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Solve Ax = b; nullopt when inconsistent. When underdetermined, free
// variables are set to zero (deterministic particular solution).
inline std::optional<RatVec> solve(const Mat& a, const RatVec& b) {
  if (rows(a) != b.size()) throw Error(ErrorCode::DimensionMismatch, "solve size");
  size_t n = cols(a);
  Mat aug = a;
  for (size_t i = 0; i < rows(a); ++i) aug[i].push_back(b[i]);
  std::vector<size_t> piv = row_reduce(aug);
  // Inconsistent row: all-zero coefficients with nonzero rhs.
  for (size_t i = 0; i < rows(aug); ++i) {
    bool allz = true;
    for (size_t j = 0; j < n; ++j)
      if (aug[i][j] != 0) { allz = false; break; }
    if (allz && aug[i][n] != 0) return std::nullopt;
  }
  RatVec x(n, Rat(0));
  for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug[k][n];
  return x;
}

inline Rat determinant(Mat a) {
  if (rows(a) != cols(a)) throw Error(ErrorCode::DimensionMismatch, "determinant: square required");
  size_t n = rows(a);
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) { std::swap(a[p], a[c]); det = -det; }
    det *= a[c][c];
    Rat inv = Rat(1) / a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] * inv;
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

inline std::optional<Mat> inverse(const Mat& a) {
  if (rows(a) != cols(a)) throw Error(ErrorCode::DimensionMismatch, "inverse: square required");
  size_t n = rows(a);
  Mat aug = a;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? Rat(1) : Rat(0));
  std::vector<size_t> piv = row_reduce(aug);
  // The augmented block [A | I] always has full row rank, so the pivot count
  // alone cannot detect singularity: every pivot must lie in the left block.
  if (piv.size() != n) return std::nullopt;
  for (size_t i = 0; i < n; ++i)
    if (piv[i] != i) return std::nullopt;
  Mat inv = make_mat(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// Basis of the nullspace {x : Ax = 0}.
inline std::vector<RatVec> kernel_basis(const Mat& a) {
  size_t n = cols(a);
  Mat r = a;
  std::vector<size_t> piv = row_reduce(r);
  std::vector<bool> is_piv(n, false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<RatVec> basis;
  for (size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    RatVec v(n, Rat(0));
    v[f] = 1;
    for (size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Leading principal minors det(A[0..k][0..k]) for k = 0..n-1.
inline RatVec leading_principal_minors(const Mat& a) {
  size_t n = rows(a);
  RatVec out;
  out.reserve(n);
  for (size_t k = 1; k <= n; ++k) {
    Mat sub = make_mat(k, k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
    out.push_back(determinant(sub));
  }
  return out;
}

// Exact positive-definiteness test (symmetric input assumed): Sylvester.
inline bool is_positive_definite(const Mat& a) {
  for (const Rat& m : leading_principal_minors(a))
    if (m <= 0) return false;
  return true;
}

// LDL^T decomposition of a symmetric positive definite matrix:
// A = L D L^T with unit lower-triangular L. Throws on non-pd input.
struct LdlResult {
  Mat l;      // unit lower triangular
  RatVec d;   // positive diagonal
};

inline LdlResult ldl_decompose(const Mat& a) {
  size_t n = rows(a);
  LdlResult res{make_mat(n, n), RatVec(n, Rat(0))};
  for (size_t i = 0; i < n; ++i) res.l[i][i] = 1;
  for (size_t j = 0; j < n; ++j) {
    Rat d = a[j][j];
    for (size_t k = 0; k < j; ++k) d -= res.l[j][k] * res.l[j][k] * res.d[k];
    if (d <= 0) throw Error(ErrorCode::InternalInconsistency, "ldl_decompose: matrix not positive definite");
    res.d[j] = d;
    for (size_t i = j + 1; i < n; ++i) {
      Rat v = a[i][j];
      for (size_t k = 0; k < j; ++k) v -= res.l[i][k] * res.l[j][k] * res.d[k];
      res.l[i][j] = v / d;
    }
  }
  return res;
}

// Certify that a symmetric bilinear form (given by its Gram matrix) is
// negative definite. On failure produces either a vector v with q(v) >= 0
// (witness) or flags the form as singular (degenerate).
struct DefinitenessResult {
  bool negative_definite = false;
  bool degenerate = false;
  RatVec witness;  // nonzero; q(witness) >= 0 when !negative_definite && !degenerate
};

namespace detail {

inline Rat quad_eval(const Mat& g, const RatVec& v) {
  Rat s = 0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) s += g[i][j] * v[i] * v[j];
  return s;
}

// Recursive congruence reduction producing a nonnegative-square witness for
// forms that are not negative definite.
inline bool negdef_witness(const Mat& g, RatVec& witness) {
  size_t n = rows(g);
  if (n == 0) return true;  // vacuously negative definite
  // Look for a nonzero diagonal entry.
  size_t piv = n;
  for (size_t i = 0; i < n; ++i)
    if (g[i][i] != 0) { piv = i; break; }
  if (piv == n) {
    // All diagonal entries vanish. Any nonzero off-diagonal entry gives a
    // positive square along e_i +/- e_j; all-zero means a radical vector.
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (g[i][j] != 0) {
          witness = RatVec(n, Rat(0));
          witness[i] = 1;
          witness[j] = g[i][j] > 0 ? Rat(1) : Rat(-1);
          return false;
        }
    witness = RatVec(n, Rat(0));  // zero form: degenerate is handled by caller
    witness[0] = 1;
    return false;
  }
  if (g[piv][piv] > 0) {
    witness = RatVec(n, Rat(0));
    witness[piv] = 1;
    return false;
  }
  // Pivot is negative; reduce the orthogonal complement by congruence.
  std::vector<size_t> rest;
  for (size_t i = 0; i < n; ++i)
    if (i != piv) rest.push_back(i);
  Mat sub = make_mat(n - 1, n - 1);
  for (size_t a = 0; a < rest.size(); ++a)
    for (size_t b = 0; b < rest.size(); ++b)
      sub[a][b] = g[rest[a]][rest[b]] - g[rest[a]][piv] * g[rest[b]][piv] / g[piv][piv];
  RatVec wsub;
  if (negdef_witness(sub, wsub)) return true;
  // Lift: v = w' - (B(e_piv, w') / g[piv][piv]) e_piv has q(v) = q_sub(w').
  witness = RatVec(n, Rat(0));
  Rat cross = 0;
  for (size_t a = 0; a < rest.size(); ++a) {
    witness[rest[a]] = wsub[a];
    cross += g[piv][rest[a]] * wsub[a];
  }
  witness[piv] = -cross / g[piv][piv];
  return false;
}

}  // namespace detail

inline DefinitenessResult certify_negative_definite(const Mat& g) {
  DefinitenessResult out;
  size_t n = rows(g);
  if (n == 0) {
    out.negative_definite = true;
    return out;
  }
  if (determinant(g) == 0) {
    out.degenerate = true;
    // Report a radical vector for diagnostics.
    auto ker = kernel_basis(g);
    if (!ker.empty()) out.witness = ker.front();
    return out;
  }
  RatVec minors = leading_principal_minors(g);
  bool alternating = true;
  for (size_t k = 0; k < minors.size(); ++k) {
    bool want_neg = (k % 2 == 0);  // (-1)^{k+1} minor_{k+1} > 0
    if (want_neg ? !(minors[k] < 0) : !(minors[k] > 0)) { alternating = false; break; }
  }
  if (alternating) {
    out.negative_definite = true;
    return out;
  }
  RatVec w;
  if (detail::negdef_witness(g, w))
    throw Error(ErrorCode::InternalInconsistency, "minor test and congruence reduction disagree");
  if (detail::quad_eval(g, w) < 0)
    throw Error(ErrorCode::InternalInconsistency, "witness has negative square");
  out.witness = std::move(w);
  return out;
}

}  // namespace mwall

#endif  // MWALL_LINALG_HPP
