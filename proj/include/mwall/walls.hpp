#pragma once

// Enumeration of candidate stability walls.
//
// Fix a polarised lattice of dimension n and a sheaf-type numerical datum
// (rank r, integral first Chern class c1, and the order-(n-2) functional of
// pairings with the second Chern class).  For a movable-curve region K (a
// rational polytope of curve classes inside the image of the ample cone
// under alpha -> alpha^{n-1}), a *wall* is a hyperplane {gamma : zeta.gamma
// = 0} meeting K, cut out by an integral class zeta congruent to -r1 c1
// modulo r for some intermediate rank 0 < r1 < r, subject to the exact
// discriminant bound
//
//     0 < -zeta^2 . phi^{n-2} <= r^2 . 2 r1 (r - r1) . Delta(phi)
//
// at a witness preimage phi of a point of the wall inside K, where
// Delta(phi) = (1/r) ( c2.phi^{n-2} - ((r-1)/2r) c1^2.phi^{n-2} ).
//
// Enumeration is exact: candidates are produced by a Fincke-Pohst sweep of
// the coset lattice under a positive-definite rational quadratic form
// obtained by adding a multiple of the squared pairing with a fixed interior
// curve class to the negated intersection pairing; the radius is the maximal
// discriminant bound over the region vertices inflated by a configurable
// safety factor (the safety factor absorbs the variation of the quadratic
// form over the region).  All filters are exact rational tests.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "rational.hpp"

namespace mwall::walls {

using lattice::CurveClass;
using lattice::DivisorClass;
using lattice::PolarisedLattice;
using lattice::SymTensor;

// ---------------------------------------------------------------------------
// Sheaf-type numerical data.
// ---------------------------------------------------------------------------

struct SheafNumerics {
  long rank = 0;
  IntVec c1;       // integral divisor class
  SymTensor c2;    // order n-2: values of c2 . e_{i_1} ... e_{i_{n-2}}
  std::string label;
};

inline RatVec c1_rat(const SheafNumerics& s) {
  RatVec v(s.c1.size());
  for (size_t i = 0; i < s.c1.size(); ++i) v[i] = Rat(s.c1[i]);
  return v;
}

inline void validate_sheaf(const PolarisedLattice& L, const SheafNumerics& s) {
  if (s.rank < 1)
    throw Error(ErrorCode::PreconditionViolated,
                "sheaf rank must be a positive integer, got " +
                    std::to_string(s.rank));
  if (static_cast<int>(s.c1.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "c1 length does not match lattice rank");
  if (s.c2.rank() != L.rank || s.c2.order() != L.dimension - 2)
    throw Error(ErrorCode::DimensionMismatch,
                "c2 functional must have order dimension-2 over the lattice");
}

// Slope of the sheaf with respect to a curve class: (c1 . gamma) / rank.
inline Rat slope(const SheafNumerics& s, const CurveClass& gamma) {
  if (gamma.coords.size() != s.c1.size())
    throw Error(ErrorCode::DimensionMismatch,
                "curve class length does not match c1 length");
  return dot(c1_rat(s), gamma.coords) / Rat(s.rank);
}

// c2 . phi^{n-2}.
inline Rat c2_pairing(const PolarisedLattice& L, const SheafNumerics& s,
                      const DivisorClass& phi) {
  SymTensor t = s.c2;
  for (int i = 0; i < L.dimension - 2; ++i) t = t.contract(phi.coords);
  return t.as_scalar();
}

// x . y . phi^{n-2} for divisor-coordinate vectors x, y.
inline Rat square_pairing(const PolarisedLattice& L, const RatVec& x, const RatVec& y,
                          const DivisorClass& phi) {
  SymTensor t = L.form;
  for (int i = 0; i < L.dimension - 2; ++i) t = t.contract(phi.coords);
  return dot(x, mat_vec(t.as_matrix(), y));
}

// Delta . phi^{n-2} = (1/r) ( c2.phi^{n-2} - ((r-1)/2r) c1^2.phi^{n-2} ).
inline Rat discriminant_pairing(const PolarisedLattice& L, const SheafNumerics& s,
                                const DivisorClass& phi) {
  Rat r(s.rank);
  RatVec c1 = c1_rat(s);
  Rat c2phi = c2_pairing(L, s, phi);
  Rat c1sq = square_pairing(L, c1, c1, phi);
  return (c2phi - (r - 1) / (2 * r) * c1sq) / r;
}

// B(phi, r1) = 2 r1 (r - r1) Delta.phi^{n-2}; candidate classes must satisfy
// -zeta^2.phi^{n-2} <= r^2 B(phi, r1).
inline Rat wall_bound(const PolarisedLattice& L, const SheafNumerics& s,
                      const DivisorClass& phi, long r1) {
  if (r1 < 1 || r1 >= s.rank)
    throw Error(ErrorCode::PreconditionViolated,
                "intermediate rank must satisfy 0 < r1 < rank");
  return Rat(2 * r1 * (s.rank - r1)) * discriminant_pairing(L, s, phi);
}

// Tensoring by a line bundle with integral class d: rank is unchanged,
// c1 shifts by rank.d, and the c2 functional shifts by the exact Whitney
// correction (r-1) c1.d + C(r,2) d^2 (paired against phi^{n-2} termwise).
inline SheafNumerics twist(const PolarisedLattice& L, const SheafNumerics& s,
                           const IntVec& d) {
  validate_sheaf(L, s);
  if (static_cast<int>(d.size()) != L.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "twist class length does not match lattice rank");
  SheafNumerics out;
  out.rank = s.rank;
  out.label = s.label.empty() ? "twisted" : s.label + " (twisted)";
  out.c1.resize(d.size());
  for (size_t i = 0; i < d.size(); ++i) out.c1[i] = s.c1[i] + Int(s.rank) * d[i];
  RatVec dr(d.size());
  for (size_t i = 0; i < d.size(); ++i) dr[i] = Rat(d[i]);
  RatVec c1 = c1_rat(s);
  // New functional on each basis multi-index m: c2.m + (r-1)(c1.d.m)
  // + C(r,2)(d.d.m), all evaluated through the intersection form.
  SymTensor c1d = L.form.contract(c1);
  c1d = c1d.contract(dr);
  SymTensor dd = L.form.contract(dr);
  dd = dd.contract(dr);
  Rat rm1(s.rank - 1);
  Rat choose2 = Rat(s.rank) * Rat(s.rank - 1) / 2;
  SymTensor out_c2(L.rank, L.dimension - 2);
  SymTensor::for_each_sorted_index(L.rank, L.dimension - 2,
                                   [&](const std::vector<int>& idx) {
    Rat v = s.c2.value(idx) + rm1 * c1d.value(idx) + choose2 * dd.value(idx);
    out_c2.set(idx, v);
  });
  out.c2 = out_c2;
  return out;
}

// ---------------------------------------------------------------------------
// Regions of curve classes.
// ---------------------------------------------------------------------------

struct Region {
  std::vector<RatVec> vertices;  // curve-class coordinates; convex hull
};

inline void validate_region(const PolarisedLattice& L, const Region& K) {
  if (K.vertices.empty())
    throw Error(ErrorCode::EmptyRegion, "region has no vertices");
  for (const auto& v : K.vertices)
    if (static_cast<int>(v.size()) != L.rank)
      throw Error(ErrorCode::DimensionMismatch,
                  "region vertex length does not match lattice rank");
}

// Default demonstration region of a polarised lattice: the convex hull of
// the power-map images of the generator-biased ample classes
// (7/4) g_i + (1/4) sum_{k != i} g_k, one vertex per generator.  Every
// vertex has a strictly ample preimage by construction.
inline Region default_region(const PolarisedLattice& L) {
  lattice::validate_lattice(L);
  Region K;
  for (size_t i = 0; i < L.ample_gens.size(); ++i) {
    RatVec phi(static_cast<size_t>(L.rank), Rat(0));
    for (size_t k = 0; k < L.ample_gens.size(); ++k) {
      Rat w = (k == i) ? Rat(7, 4) : Rat(1, 4);
      phi = vec_add(phi, vec_scale(w, L.ample_gens[k]));
    }
    K.vertices.push_back(
        lattice::power_map(L, DivisorClass{phi}).coords);
  }
  return K;
}

// Does the hyperplane {gamma : zeta.gamma = 0} meet the convex hull of K?
// Exact: the linear functional attains 0 on the hull iff its vertex minimum
// and maximum straddle 0 (inclusive).
inline bool wall_meets_region(const RatVec& zeta, const Region& K) {
  bool has_nonneg = false, has_nonpos = false;
  for (const auto& v : K.vertices) {
    Rat t = dot(zeta, v);
    if (t >= 0) has_nonneg = true;
    if (t <= 0) has_nonpos = true;
    if (has_nonneg && has_nonpos) return true;
  }
  return false;
}

// Canonical point of (hyperplane cut by zeta) intersect hull(K): the optimum
// of the exact LP  max t  s.t.  mu_v >= t, sum mu = 1, sum mu_v (zeta.g_v) = 0,
// t <= 1.  Returns nullopt when the wall misses the region.
inline std::optional<RatVec> canonical_wall_point(const RatVec& zeta, const Region& K) {
  const int m = static_cast<int>(K.vertices.size());
  LpProblem lp;
  lp.num_vars = m + 1;  // mu_0..mu_{m-1}, t
  {
    LpConstraint sum1;
    sum1.coeffs.assign(m + 1, Rat(0));
    for (int i = 0; i < m; ++i) sum1.coeffs[i] = 1;
    sum1.rel = Rel::Eq;
    sum1.rhs = 1;
    lp.constraints.push_back(std::move(sum1));
  }
  {
    LpConstraint onwall;
    onwall.coeffs.assign(m + 1, Rat(0));
    for (int i = 0; i < m; ++i) onwall.coeffs[i] = dot(zeta, K.vertices[i]);
    onwall.rel = Rel::Eq;
    onwall.rhs = 0;
    lp.constraints.push_back(std::move(onwall));
  }
  for (int i = 0; i < m; ++i) {
    LpConstraint c;
    c.coeffs.assign(m + 1, Rat(0));
    c.coeffs[i] = 1;
    c.coeffs[m] = -1;
    c.rel = Rel::Ge;
    c.rhs = 0;
    lp.constraints.push_back(std::move(c));
  }
  {
    LpConstraint cap;
    cap.coeffs.assign(m + 1, Rat(0));
    cap.coeffs[m] = 1;
    cap.rel = Rel::Le;
    cap.rhs = 1;
    lp.constraints.push_back(std::move(cap));
  }
  lp.objective.assign(m + 1, Rat(0));
  lp.objective[m] = 1;
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  RatVec gamma(K.vertices[0].size(), Rat(0));
  for (int i = 0; i < m; ++i)
    gamma = vec_add(gamma, vec_scale(res.x[i], K.vertices[i]));
  return gamma;
}

// ---------------------------------------------------------------------------
// Region certification: every vertex must have a strictly ample power-map
// preimage.  Newton failures are reported as RegionNotInP.
// ---------------------------------------------------------------------------

struct RegionCertificate {
  std::vector<DivisorClass> vertex_preimages;
  DivisorClass interior_preimage;  // preimage barycenter (strictly ample)
};

inline RegionCertificate certify_region(const PolarisedLattice& L, const Region& K,
                                        unsigned newton_bits = 64) {
  validate_region(L, K);
  RegionCertificate cert;
  lattice::NewtonSettings settings;
  settings.denominator_bits = newton_bits;
  for (const auto& v : K.vertices) {
    try {
      auto res = lattice::newton_invert_power(L, CurveClass(v), std::nullopt, settings);
      cert.vertex_preimages.push_back(res.alpha);
    } catch (const Error& e) {
      throw Error(ErrorCode::RegionNotInP,
                  "region vertex " + vec_str(v) +
                      " has no certified ample preimage under the power map: " +
                      e.what());
    }
  }
  RatVec bc(L.rank, Rat(0));
  for (const auto& p : cert.vertex_preimages) bc = vec_add(bc, p.coords);
  bc = vec_scale(Rat(1) / Rat(static_cast<long>(cert.vertex_preimages.size())), bc);
  // Prefer a compact representative: round and verify strict ampleness, fall
  // back to the exact barycenter (which is ample as a convex combination).
  RatVec rounded(bc.size());
  for (size_t i = 0; i < bc.size(); ++i) rounded[i] = round_denominator(bc[i], 16);
  if (lattice::is_in_ample_cone(L, DivisorClass(rounded), /*strict=*/true))
    cert.interior_preimage = DivisorClass(rounded);
  else
    cert.interior_preimage = DivisorClass(bc);
  return cert;
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration of integer vectors y with (y-c)^T G (y-c) <= R
// for an exactly positive-definite rational G.  Candidates are visited in
// deterministic order (last coordinate outermost, ascending).
// ---------------------------------------------------------------------------

namespace detail {

struct FpContext {
  const Mat* l;          // unit lower-triangular factor (G = L D L^T)
  const RatVec* d;       // positive pivots
  RatVec center;
  long budget;
  long visited = 0;
  std::vector<IntVec> out;
};

// Recursive sweep over coordinate i (from last to first).  z holds y - c for
// the already-fixed coordinates (indices > i).
inline void fp_recurse(FpContext& ctx, int i, RatVec& z, IntVec& y, const Rat& remaining) {
  const Mat& l = *ctx.l;
  const RatVec& d = *ctx.d;
  if (i < 0) {
    ctx.out.push_back(y);
    return;
  }
  // offset = sum_{j>i} L[j][i] z_j ; the term is d_i (z_i + offset)^2.
  Rat offset(0);
  for (size_t j = i + 1; j < z.size(); ++j) offset += l[j][i] * z[j];
  // y_i must satisfy d_i (y_i - c_i + offset)^2 <= remaining.
  Rat mid = ctx.center[i] - offset;
  Rat radius_sq = remaining / d[i];
  Int spread = floor_sqrt(radius_sq);
  Int lo = ceil_rat(mid) - spread - 1;
  Int hi = floor_rat(mid) + spread + 1;
  for (Int yi = lo; yi <= hi; ++yi) {
    if (++ctx.visited > ctx.budget)
      throw Error(ErrorCode::EnumerationBudgetExceeded,
                  "lattice sweep exceeded the point budget of " +
                      std::to_string(ctx.budget));
    Rat t = Rat(yi) - mid;
    Rat term = d[i] * t * t;
    if (term > remaining) continue;
    y[i] = yi;
    z[i] = Rat(yi) - ctx.center[i];
    fp_recurse(ctx, i - 1, z, y, remaining - term);
  }
}

inline std::vector<IntVec> fp_enumerate(const Mat& g, const RatVec& c, const Rat& radius,
                                        long budget, long& visited) {
  LdlResult ldl = ldl_decompose(g);
  FpContext ctx;
  ctx.l = &ldl.l;
  ctx.d = &ldl.d;
  ctx.center = c;
  ctx.budget = budget;
  const int n = static_cast<int>(c.size());
  RatVec z(n, Rat(0));
  IntVec y(n, Int(0));
  if (radius >= 0) fp_recurse(ctx, n - 1, z, y, radius);
  visited += ctx.visited;
  return ctx.out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Wall enumeration.
// ---------------------------------------------------------------------------

struct Wall {
  IntVec normal;        // primitive integer normal, first nonzero entry > 0
  long r1 = 0;          // witnessing intermediate rank
  IntVec zeta;          // witnessing coset class (normal direction, unscaled)
  RatVec witness_point; // region point whose preimage certifies the bound
                        // (a wall point when its preimage converges, else a
                        // region vertex)
  Rat neg_self_pairing; // -zeta^2 . phi^{n-2} at the witness preimage
  Rat bound_value;      // r^2 B(phi, r1) at the witness preimage
};

inline bool wall_normal_less(const IntVec& a, const IntVec& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

struct WallEnumeration {
  std::vector<Wall> walls;      // sorted by normal, lexicographically
  Rat radius;                   // enumeration radius R (after safety)
  Rat lambda;                   // stabilising weight in the sweep form
  long points_examined = 0;     // lattice points visited across sweeps
  long candidates_tested = 0;   // nonzero in-radius coset classes
};

struct WallOptions {
  Rat safety = 4;
  long budget = 1000000;
  unsigned newton_bits = 64;
};

inline WallEnumeration enumerate_walls(const PolarisedLattice& L,
                                       const SheafNumerics& s, const Region& K,
                                       const WallOptions& opts = WallOptions()) {
  validate_sheaf(L, s);
  validate_region(L, K);
  if (opts.safety <= 0)
    throw Error(ErrorCode::PreconditionViolated, "safety factor must be positive");
  WallEnumeration out;
  out.lambda = 1;
  out.radius = 0;
  if (s.rank == 1) return out;  // no intermediate ranks, no walls

  RegionCertificate cert = certify_region(L, K, opts.newton_bits);

  // Discriminant pairing at each vertex preimage; all must be nonnegative.
  RatVec deltas;
  Rat max_delta(0);
  for (const auto& p : cert.vertex_preimages) {
    Rat dl = discriminant_pairing(L, s, p);
    if (dl < 0)
      throw Error(ErrorCode::NegativeBound,
                  "discriminant pairing is negative at a region vertex "
                  "preimage: " + rat_str(dl));
    deltas.push_back(dl);
    if (dl > max_delta) max_delta = dl;
  }
  long r = s.rank;
  long r1max = (r / 2) * (r - r / 2);  // max over r1 of r1 (r - r1)
  Rat rsq(r * r);
  out.radius = opts.safety * rsq * Rat(2 * r1max) * max_delta;

  // Positive-definite sweep form at the interior preimage phi*:
  //   Q(x) = -x^T M x + lambda (q . x)^2,  q = power map image of phi*.
  const DivisorClass& phi_star = cert.interior_preimage;
  Mat m_star = lattice::lefschetz_map(L, phi_star);
  RatVec q_star = lattice::power_map(L, phi_star).coords;
  Mat base = make_mat(L.rank, L.rank);
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) base[i][j] = -m_star[i][j];
  Rat lambda(1);
  Mat g;
  for (int attempt = 0; attempt < 256; ++attempt) {
    g = base;
    for (int i = 0; i < L.rank; ++i)
      for (int j = 0; j < L.rank; ++j) g[i][j] += lambda * q_star[i] * q_star[j];
    if (is_positive_definite(g)) break;
    lambda *= 2;
    if (attempt == 255)
      throw Error(ErrorCode::InternalInconsistency,
                  "failed to stabilise the sweep form (is the interior "
                  "preimage ample?)");
  }
  out.lambda = lambda;

  lattice::NewtonSettings witness_settings;
  witness_settings.denominator_bits = opts.newton_bits;

  std::map<IntVec, Wall, bool (*)(const IntVec&, const IntVec&)> found(
      wall_normal_less);

  // Bound test at a given preimage point: 0 < -zeta^2.phi^{n-2} <= r^2 B.
  auto bound_at = [&](const IntVec& zeta, long r1, const DivisorClass& phi,
                      Rat& neg_sq, Rat& bound) {
    RatVec zr(zeta.size());
    for (size_t i = 0; i < zeta.size(); ++i) zr[i] = Rat(zeta[i]);
    neg_sq = -square_pairing(L, zr, zr, phi);
    bound = rsq * wall_bound(L, s, phi, r1);
    return neg_sq > 0 && neg_sq <= bound;
  };

  for (long r1 = 1; r1 < r; ++r1) {
    // Coset representative of -r1 c1 modulo r.
    RatVec center(L.rank);
    IntVec s0(L.rank);
    for (int i = 0; i < L.rank; ++i) {
      Int t = Int(-r1) * s.c1[i];
      Int rr(r);
      Int mod;
      mpz_fdiv_r(mod.get_mpz_t(), t.get_mpz_t(), rr.get_mpz_t());
      s0[i] = mod;                       // in [0, r)
      center[i] = Rat(Int(-mod)) / Rat(r);
    }
    Rat sweep_radius = out.radius / rsq;
    std::vector<IntVec> ys =
        detail::fp_enumerate(g, center, sweep_radius, opts.budget - out.points_examined,
                             out.points_examined);
    for (const auto& y : ys) {
      IntVec zeta(L.rank);
      bool zero = true;
      for (int i = 0; i < L.rank; ++i) {
        zeta[i] = s0[i] + Int(r) * y[i];
        if (zeta[i] != 0) zero = false;
      }
      if (zero) continue;
      ++out.candidates_tested;
      IntVec normal = primitive_vector(zeta);
      if (found.count(normal)) continue;
      RatVec zr(zeta.size());
      for (size_t i = 0; i < zeta.size(); ++i) zr[i] = Rat(zeta[i]);
      if (!wall_meets_region(zr, K)) continue;
      // Witness point on the wall inside the region, then the exact bound.
      auto gamma0 = canonical_wall_point(zr, K);
      if (!gamma0) continue;
      Wall w;
      w.normal = normal;
      w.r1 = r1;
      w.zeta = zeta;
      bool pass = false;
      try {
        auto res = lattice::newton_invert_power(
            L, CurveClass(*gamma0),
            std::optional<DivisorClass>(cert.interior_preimage), witness_settings);
        if (bound_at(zeta, r1, res.alpha, w.neg_self_pairing, w.bound_value)) {
          pass = true;
          w.witness_point = *gamma0;
        }
      } catch (const Error&) {
        // fall through to the vertex fallback
      }
      if (!pass) {
        for (size_t vi = 0; vi < cert.vertex_preimages.size() && !pass; ++vi) {
          if (bound_at(zeta, r1, cert.vertex_preimages[vi], w.neg_self_pairing,
                       w.bound_value)) {
            pass = true;
            w.witness_point = K.vertices[vi];
          }
        }
      }
      if (pass) found.emplace(normal, std::move(w));
    }
  }
  for (auto& [normal, wall] : found) out.walls.push_back(std::move(wall));
  return out;
}

}  // namespace mwall::walls
