#pragma once

// Polarised intersection lattices: a free Z-module of divisor classes of
// finite rank equipped with a symmetric n-linear intersection form and a
// finite list of ample generators spanning (a rational polyhedral subcone
// of) the ample cone.  Everything here is exact rational arithmetic.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace mwall::lattice {

// ---------------------------------------------------------------------------
// Strong coordinate types.
//
// DivisorClass holds coordinates in the chosen basis e_0..e_{rank-1} of the
// divisor lattice; CurveClass holds coordinates in the dual basis, i.e. the
// functional gamma acts on a divisor D as dot(gamma.coords, D.coords).
// ---------------------------------------------------------------------------

struct DivisorClass {
  RatVec coords;
  DivisorClass() = default;
  explicit DivisorClass(RatVec c) : coords(std::move(c)) {}
};

struct CurveClass {
  RatVec coords;
  CurveClass() = default;
  explicit CurveClass(RatVec c) : coords(std::move(c)) {}
};

inline Rat pair_curve_divisor(const CurveClass& gamma, const DivisorClass& d) {
  if (gamma.coords.size() != d.coords.size())
    throw Error(ErrorCode::DimensionMismatch,
                "curve/divisor coordinate length mismatch");
  return dot(gamma.coords, d.coords);
}

// ---------------------------------------------------------------------------
// SymTensor: a symmetric multilinear form of a given order on a lattice of a
// given rank.  Entries are stored once per sorted multi-index; the stored
// value is the value of the form on the corresponding basis tuple (in any
// order, by symmetry).  Missing entries are zero.
// ---------------------------------------------------------------------------

class SymTensor {
 public:
  SymTensor() : rank_(0), order_(0) {}
  SymTensor(int rank, int order) : rank_(rank), order_(order) {
    if (rank <= 0 || order < 0)
      throw Error(ErrorCode::PreconditionViolated,
                  "tensor rank must be positive and order nonnegative");
  }

  int rank() const { return rank_; }
  int order() const { return order_; }

  // Set the entry for a multi-index (any order of indices).
  void set(std::vector<int> idx, const Rat& v) {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    if (v == 0)
      entries_.erase(idx);
    else
      entries_[idx] = v;
  }

  Rat value(std::vector<int> idx) const {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    auto it = entries_.find(idx);
    return it == entries_.end() ? Rat(0) : it->second;
  }

  const std::map<std::vector<int>, Rat>& entries() const { return entries_; }

  // Contract one slot against a coordinate vector, producing a tensor of
  // order one less:  G[J] = sum_i F[J + (i)] * v[i].
  SymTensor contract(const RatVec& v) const {
    if (static_cast<int>(v.size()) != rank_)
      throw Error(ErrorCode::DimensionMismatch,
                  "contraction vector length does not match tensor rank");
    if (order_ == 0)
      throw Error(ErrorCode::PreconditionViolated,
                  "cannot contract a scalar tensor");
    SymTensor out(rank_, order_ - 1);
    for_each_sorted_index(rank_, order_ - 1, [&](const std::vector<int>& J) {
      Rat acc(0);
      std::vector<int> full(J);
      full.push_back(0);
      for (int i = 0; i < rank_; ++i) {
        if (v[i] == 0) continue;
        full.back() = i;
        std::vector<int> key(full);
        std::sort(key.begin(), key.end());
        auto it = entries_.find(key);
        if (it != entries_.end()) acc += it->second * v[i];
      }
      if (acc != 0) out.entries_[J] = acc;
    });
    return out;
  }

  Rat as_scalar() const {
    if (order_ != 0)
      throw Error(ErrorCode::PreconditionViolated, "tensor is not a scalar");
    auto it = entries_.find({});
    return it == entries_.end() ? Rat(0) : it->second;
  }

  RatVec as_vector() const {
    if (order_ != 1)
      throw Error(ErrorCode::PreconditionViolated, "tensor is not order 1");
    RatVec v(rank_, Rat(0));
    for (const auto& [idx, val] : entries_) v[idx[0]] = val;
    return v;
  }

  Mat as_matrix() const {
    if (order_ != 2)
      throw Error(ErrorCode::PreconditionViolated, "tensor is not order 2");
    Mat m = make_mat(rank_, rank_);
    for (const auto& [idx, val] : entries_) {
      m[idx[0]][idx[1]] = val;
      m[idx[1]][idx[0]] = val;
    }
    return m;
  }

  // Enumerate all non-decreasing index tuples of the given order.
  static void for_each_sorted_index(
      int rank, int order, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(order, 0);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == order) {
        fn(idx);
        return;
      }
      for (int i = lo; i < rank; ++i) {
        idx[pos] = i;
        rec(pos + 1, i);
      }
    };
    rec(0, 0);
  }

 private:
  void check_index(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order_)
      throw Error(ErrorCode::DimensionMismatch,
                  "multi-index length does not match tensor order");
    for (int i : idx)
      if (i < 0 || i >= rank_)
        throw Error(ErrorCode::DimensionMismatch,
                    "multi-index entry out of range");
  }

  int rank_;
  int order_;
  std::map<std::vector<int>, Rat> entries_;
};

// ---------------------------------------------------------------------------
// PolarisedLattice
// ---------------------------------------------------------------------------

struct PolarisedLattice {
  std::string name;
  int dimension = 0;              // n: the order of the intersection form
  int rank = 0;                   // number of basis divisor classes
  SymTensor form;                 // symmetric n-linear intersection form
  std::vector<RatVec> ample_gens; // generators of the (sub)cone of ample classes
};

// Intersection number of exactly n divisor classes.
inline Rat intersection_number(const PolarisedLattice& L,
                               const std::vector<DivisorClass>& divisors) {
  if (static_cast<int>(divisors.size()) != L.dimension)
    throw Error(ErrorCode::DimensionMismatch,
                "intersection_number requires exactly dimension-many divisors, got " +
                    std::to_string(divisors.size()) + " for dimension " +
                    std::to_string(L.dimension));
  SymTensor t = L.form;
  for (const auto& d : divisors) {
    if (static_cast<int>(d.coords.size()) != L.rank)
      throw Error(ErrorCode::DimensionMismatch,
                  "divisor coordinate length does not match lattice rank");
    t = t.contract(d.coords);
  }
  return t.as_scalar();
}

// alpha^k as a symmetric form of order n-k (1 <= k <= n-1).
inline SymTensor power_tensor(const PolarisedLattice& L, const DivisorClass& alpha,
                              int k) {
  if (k < 1 || k > L.dimension - 1)
    throw Error(ErrorCode::PreconditionViolated,
                "power exponent must lie in [1, dimension-1]");
  if (static_cast<int>(alpha.coords.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "divisor coordinate length does not match lattice rank");
  SymTensor t = L.form;
  for (int i = 0; i < k; ++i) t = t.contract(alpha.coords);
  return t;
}

// The power map p: alpha -> alpha^{n-1}, landing in curve-class coordinates
// (the i-th coordinate is e_i . alpha^{n-1}).
inline CurveClass power_map(const PolarisedLattice& L, const DivisorClass& alpha) {
  return CurveClass(power_tensor(L, alpha, L.dimension - 1).as_vector());
}

// Self-intersection alpha^n.
inline Rat top_self_intersection(const PolarisedLattice& L, const DivisorClass& alpha) {
  return dot(power_map(L, alpha).coords, alpha.coords);
}

// The symmetric bilinear form (x, y) -> x . y . H^{n-2}, as a matrix.
inline Mat lefschetz_map(const PolarisedLattice& L, const DivisorClass& h) {
  if (L.dimension < 2)
    throw Error(ErrorCode::PreconditionViolated,
                "lefschetz_map requires dimension >= 2");
  if (L.dimension == 2) return L.form.as_matrix();
  return power_tensor(L, h, L.dimension - 2).as_matrix();
}

// Solve (x . e_i . h^{n-2})_i = gamma for x.
inline DivisorClass lefschetz_inverse(const PolarisedLattice& L, const DivisorClass& h,
                                      const CurveClass& gamma) {
  if (static_cast<int>(gamma.coords.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "curve coordinate length does not match lattice rank");
  Mat m = lefschetz_map(L, h);
  auto x = solve(m, gamma.coords);
  if (!x || determinant(m) == 0)
    throw Error(ErrorCode::SingularLefschetz,
                "pairing with h^{n-2} is singular; cannot invert");
  return DivisorClass(*x);
}

// Barycenter of the ample generators (a canonical interior point).
inline DivisorClass ample_barycenter(const PolarisedLattice& L) {
  if (L.ample_gens.empty())
    throw Error(ErrorCode::PreconditionViolated, "lattice has no ample generators");
  RatVec c(L.rank, Rat(0));
  for (const auto& g : L.ample_gens) c = vec_add(c, g);
  Rat inv = Rat(1) / Rat(static_cast<long>(L.ample_gens.size()));
  return DivisorClass(vec_scale(inv, c));
}

namespace detail {

// Decide membership of d in the cone spanned by the generators.
//   strict = false: d is a nonnegative combination of the generators.
//   strict = true : d admits a representation with *all* coefficients
//                   strictly positive (relative interior of the cone, which
//                   for a full-dimensional cone is its topological interior).
// Implemented as an exact LP: maximise t subject to sum lambda_i g_i = d,
// lambda_i >= t, t <= 1; strict membership holds iff the optimum is > 0.
inline bool cone_membership(const std::vector<RatVec>& gens, const RatVec& d,
                            bool strict) {
  const int m = static_cast<int>(gens.size());
  const int rank = static_cast<int>(d.size());
  if (m == 0) return false;
  // Variables: lambda_0..lambda_{m-1}, t  (all >= 0).
  LpProblem lp;
  lp.num_vars = m + 1;
  for (int r = 0; r < rank; ++r) {
    LpConstraint c;
    c.coeffs.assign(m + 1, Rat(0));
    for (int i = 0; i < m; ++i) c.coeffs[i] = gens[i][r];
    c.rel = Rel::Eq;
    c.rhs = d[r];
    lp.constraints.push_back(std::move(c));
  }
  if (strict) {
    for (int i = 0; i < m; ++i) {
      LpConstraint c;
      c.coeffs.assign(m + 1, Rat(0));
      c.coeffs[i] = 1;
      c.coeffs[m] = -1;
      c.rel = Rel::Ge;
      c.rhs = 0;
      lp.constraints.push_back(std::move(c));
    }
    LpConstraint cap;
    cap.coeffs.assign(m + 1, Rat(0));
    cap.coeffs[m] = 1;
    cap.rel = Rel::Le;
    cap.rhs = 1;
    lp.constraints.push_back(std::move(cap));
    lp.objective.assign(m + 1, Rat(0));
    lp.objective[m] = 1;
    LpResult res = lp_solve(lp);
    return res.status == LpStatus::Optimal && res.value > 0;
  }
  return lp_feasible_point(lp).has_value();
}

}  // namespace detail

// Membership of a divisor class in the polyhedral cone spanned by the ample
// generators.  strict=true tests the interior (every coefficient positive).
inline bool is_in_ample_cone(const PolarisedLattice& L, const DivisorClass& d,
                             bool strict) {
  if (static_cast<int>(d.coords.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "divisor coordinate length does not match lattice rank");
  return detail::cone_membership(L.ample_gens, d.coords, strict);
}

// ---------------------------------------------------------------------------
// Hodge-index certification.
//
// For alpha with alpha^n > 0, the bilinear form B(x, y) = x . y . alpha^{n-2}
// must be negative definite on the hyperplane alpha^{n-1} . x = 0.  We verify
// this exactly and, on failure, produce a witness divisor class x in that
// hyperplane with B(x, x) >= 0.  A degenerate restriction (radical vector)
// raises DegenerateForm.
// ---------------------------------------------------------------------------

struct HodgeIndexResult {
  bool negative_definite = false;
  // When !negative_definite: a divisor class w with alpha^{n-1}.w = 0 and
  // w . w . alpha^{n-2} >= 0.
  RatVec witness;
  Rat witness_value;  // w . w . alpha^{n-2}
};

inline HodgeIndexResult verify_hodge_index(const PolarisedLattice& L,
                                           const DivisorClass& alpha) {
  Rat top = top_self_intersection(L, alpha);
  if (top <= 0)
    throw Error(ErrorCode::PreconditionViolated,
                "hodge index certification requires alpha^n > 0, got " +
                    rat_str(top));
  Mat m = lefschetz_map(L, alpha);
  RatVec q = mat_vec(m, alpha.coords);  // functional x -> alpha^{n-1} . x
  Mat qrow = {q};
  std::vector<RatVec> ker = kernel_basis(qrow);
  HodgeIndexResult out;
  if (ker.empty()) {  // rank-1 lattice: hyperplane is {0}; vacuously definite
    out.negative_definite = true;
    return out;
  }
  const int k = static_cast<int>(ker.size());
  Mat restricted = make_mat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) restricted[i][j] = dot(ker[i], mat_vec(m, ker[j]));
  DefinitenessResult cert = certify_negative_definite(restricted);
  if (cert.degenerate) {
    // Lift the radical vector to lattice coordinates for the error message.
    RatVec lift(L.rank, Rat(0));
    for (int i = 0; i < k; ++i)
      lift = vec_add(lift, vec_scale(cert.witness[i], ker[i]));
    throw Error(ErrorCode::DegenerateForm,
                "restriction of the intersection pairing to the primitive "
                "hyperplane is degenerate; radical witness " +
                    vec_str(lift));
  }
  out.negative_definite = cert.negative_definite;
  if (!cert.negative_definite) {
    RatVec lift(L.rank, Rat(0));
    for (int i = 0; i < k; ++i)
      lift = vec_add(lift, vec_scale(cert.witness[i], ker[i]));
    out.witness = lift;
    out.witness_value = dot(lift, mat_vec(m, lift));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lattice validation (applied at load time).
//
// Gates: positive dimension/rank, form entries of order n; at least one ample
// generator; every generator has g^n >= 0; the barycenter beta of the
// generators satisfies beta^n > 0 and passes Hodge-index certification, and
// so does every generator with strictly positive self-intersection.
// ---------------------------------------------------------------------------

inline void validate_lattice(const PolarisedLattice& L) {
  if (L.dimension < 2)
    throw Error(ErrorCode::PreconditionViolated,
                "lattice dimension must be at least 2");
  if (L.rank < 1)
    throw Error(ErrorCode::PreconditionViolated, "lattice rank must be at least 1");
  if (L.form.rank() != L.rank || L.form.order() != L.dimension)
    throw Error(ErrorCode::DimensionMismatch,
                "intersection form shape does not match lattice dimensions");
  if (L.ample_gens.empty())
    throw Error(ErrorCode::PreconditionViolated,
                "lattice must declare at least one ample generator");
  for (const auto& g : L.ample_gens) {
    if (static_cast<int>(g.size()) != L.rank)
      throw Error(ErrorCode::DimensionMismatch,
                  "ample generator length does not match lattice rank");
    Rat gn = top_self_intersection(L, DivisorClass(g));
    if (gn < 0)
      throw Error(ErrorCode::PreconditionViolated,
                  "ample generator has negative self-intersection: " + vec_str(g));
  }
  DivisorClass beta = ample_barycenter(L);
  if (top_self_intersection(L, beta) <= 0)
    throw Error(ErrorCode::PreconditionViolated,
                "barycenter of ample generators must have positive "
                "self-intersection");
  HodgeIndexResult hb = verify_hodge_index(L, beta);
  if (!hb.negative_definite)
    throw Error(ErrorCode::PreconditionViolated,
                "barycenter of ample generators fails the signature test; "
                "witness " + vec_str(hb.witness));
  for (const auto& g : L.ample_gens) {
    DivisorClass gd(g);
    if (top_self_intersection(L, gd) > 0) {
      HodgeIndexResult hg = verify_hodge_index(L, gd);
      if (!hg.negative_definite)
        throw Error(ErrorCode::PreconditionViolated,
                    "ample generator fails the signature test: " + vec_str(g));
    }
  }
}

// ---------------------------------------------------------------------------
// Khovanskii–Teissier inequalities.
//
// For nef alpha, beta the mixed products m_j = alpha^{n-j} . beta^j satisfy
// m_{j+1}^2 >= m_j m_{j+2}.  We report the full product sequence and the
// slack of each inequality.
// ---------------------------------------------------------------------------

struct KhovanskiiTeissierResult {
  RatVec products;       // m_0 .. m_n
  RatVec slacks;         // m_{j+1}^2 - m_j m_{j+2}, j = 0..n-2
  bool all_nonnegative = false;
};

inline KhovanskiiTeissierResult khovanskii_teissier(const PolarisedLattice& L,
                                                    const DivisorClass& alpha,
                                                    const DivisorClass& beta) {
  const int n = L.dimension;
  KhovanskiiTeissierResult out;
  out.products.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    SymTensor t = L.form;
    for (int i = 0; i < n - j; ++i) t = t.contract(alpha.coords);
    for (int i = 0; i < j; ++i) t = t.contract(beta.coords);
    out.products[j] = t.as_scalar();
  }
  out.all_nonnegative = true;
  out.slacks.resize(n - 1);
  for (int j = 0; j + 2 <= n; ++j) {
    out.slacks[j] = out.products[j + 1] * out.products[j + 1] -
                    out.products[j] * out.products[j + 2];
    if (out.slacks[j] < 0) out.all_nonnegative = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Newton inversion of the power map.
//
// Given a target curve class gamma in the image of the ample cone under
// p: alpha -> alpha^{n-1}, find alpha with sup-norm residual <= tol.  The
// derivative of p at alpha is (n-1) times the pairing matrix with alpha^{n-2};
// each Newton iterate is rounded to denominators 2^denom_bits to keep the
// rational sizes bounded.  The residual after every step is recorded so that
// callers can verify the quadratic contraction of the iteration.
// ---------------------------------------------------------------------------

struct NewtonSettings {
  Rat tolerance;
  int max_iterations = 64;
  unsigned denominator_bits = 256;
  NewtonSettings() {
    tolerance = Rat(Int(1), pow_int(Int(10), 12));
  }
  static Int pow_int(Int base, int e) {
    Int r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  }
};

struct NewtonResult {
  DivisorClass alpha;
  RatVec residual_trace;  // sup-norm residual after 0, 1, 2, ... steps
  int iterations = 0;
};

inline NewtonResult newton_invert_power(const PolarisedLattice& L,
                                        const CurveClass& gamma,
                                        std::optional<DivisorClass> seed = std::nullopt,
                                        NewtonSettings settings = NewtonSettings()) {
  if (static_cast<int>(gamma.coords.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "curve coordinate length does not match lattice rank");
  DivisorClass alpha = seed ? *seed : ample_barycenter(L);
  const int n = L.dimension;
  NewtonResult out;
  auto residual = [&](const DivisorClass& a) {
    return vec_sub(gamma.coords, power_map(L, a).coords);
  };
  RatVec r = residual(alpha);
  out.residual_trace.push_back(sup_norm(r));
  for (int it = 0; it < settings.max_iterations; ++it) {
    if (out.residual_trace.back() <= settings.tolerance) break;
    Mat deriv = lefschetz_map(L, alpha);
    for (auto& row : deriv)
      for (auto& v : row) v *= n - 1;
    if (determinant(deriv) == 0)
      throw Error(ErrorCode::SingularDerivative,
                  "derivative of the power map is singular at the current "
                  "iterate " + vec_str(alpha.coords));
    auto delta = solve(deriv, r);
    if (!delta)
      throw Error(ErrorCode::SingularDerivative,
                  "derivative of the power map is singular at the current "
                  "iterate " + vec_str(alpha.coords));
    RatVec next = vec_add(alpha.coords, *delta);
    for (auto& v : next) v = round_denominator(v, settings.denominator_bits);
    alpha = DivisorClass(next);
    r = residual(alpha);
    out.residual_trace.push_back(sup_norm(r));
    out.iterations = it + 1;
  }
  if (out.residual_trace.back() > settings.tolerance)
    throw Error(ErrorCode::NoConvergence,
                "power-map inversion did not reach tolerance " +
                    rat_str(settings.tolerance) + " after " +
                    std::to_string(settings.max_iterations) +
                    " iterations; last residual " +
                    rat_str(out.residual_trace.back()));
  // Exact refinement: when the true preimage is a shallow dyadic class, the
  // converged iterate rounds onto it.  Accept a snapped candidate only when
  // its power image reproduces gamma exactly and it stays strictly ample.
  if (out.residual_trace.back() != 0) {
    for (unsigned bits = 0; bits <= 24; ++bits) {
      RatVec cand(alpha.coords.size());
      for (size_t i = 0; i < cand.size(); ++i)
        cand[i] = round_denominator(alpha.coords[i], bits);
      DivisorClass snapped(cand);
      if (power_map(L, snapped).coords == gamma.coords &&
          is_in_ample_cone(L, snapped, /*strict=*/true)) {
        alpha = snapped;
        out.residual_trace.push_back(Rat(0));
        break;
      }
    }
  }
  if (!is_in_ample_cone(L, alpha, /*strict=*/true))
    throw Error(ErrorCode::ResultNotAmple,
                "power-map inversion converged to a class outside the ample "
                "cone: " + vec_str(alpha.coords));
  out.alpha = alpha;
  return out;
}

}  // namespace mwall::lattice
