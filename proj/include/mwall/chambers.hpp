#pragma once

// Chamber decomposition of curve-class regions cut by wall hyperplanes,
// crossing parameters along segments (linear and exact in curve coordinates;
// degree n-1 with certified rational/algebraic roots along ample segments),
// nonlinearity witnesses for pulled-back walls, and the constructive
// complete-intersection representative of a chamber.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "walls.hpp"

namespace mwall::chambers {

using lattice::CurveClass;
using lattice::DivisorClass;
using lattice::PolarisedLattice;
using walls::Region;

inline int rat_sign(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// ---------------------------------------------------------------------------
// Sign vectors.
// ---------------------------------------------------------------------------

inline RatVec normal_rat(const IntVec& n) {
  RatVec v(n.size());
  for (size_t i = 0; i < n.size(); ++i) v[i] = Rat(n[i]);
  return v;
}

inline std::vector<int> sign_vector(const std::vector<IntVec>& normals,
                                    const RatVec& gamma) {
  std::vector<int> out;
  out.reserve(normals.size());
  for (const auto& n : normals) out.push_back(rat_sign(dot(normal_rat(n), gamma)));
  return out;
}

inline bool same_chamber(const std::vector<IntVec>& normals, const RatVec& g1,
                         const RatVec& g2) {
  return sign_vector(normals, g1) == sign_vector(normals, g2);
}

// ---------------------------------------------------------------------------
// Decomposition of a region into sign-vector cells.
// ---------------------------------------------------------------------------

struct Chamber {
  std::vector<int> signs;        // one entry in {-1, 0, +1} per wall
  RatVec representative;         // exact point realizing the sign vector
  std::vector<long> walls_active;  // indices with sign 0
  bool full_dimensional = false;   // no zero signs
};

namespace detail {

// Feasibility of a sign pattern over hull(K): gamma = sum mu_v vertex_v with
// mu >= 0, sum mu = 1; strict signs are imposed as >= t with t maximised
// (feasible iff the optimum is positive); zero signs as equalities.  Returns
// the realizing point.
inline std::optional<RatVec> cell_point(const Region& K,
                                        const std::vector<IntVec>& normals,
                                        const std::vector<int>& signs) {
  const int m = static_cast<int>(K.vertices.size());
  LpProblem lp;
  lp.num_vars = m + 1;  // mu, t
  bool any_strict = false;
  {
    LpConstraint sum1;
    sum1.coeffs.assign(m + 1, Rat(0));
    for (int i = 0; i < m; ++i) sum1.coeffs[i] = 1;
    sum1.rel = Rel::Eq;
    sum1.rhs = 1;
    lp.constraints.push_back(std::move(sum1));
  }
  for (size_t w = 0; w < signs.size(); ++w) {
    LpConstraint c;
    c.coeffs.assign(m + 1, Rat(0));
    RatVec nr = normal_rat(normals[w]);
    for (int i = 0; i < m; ++i) c.coeffs[i] = dot(nr, K.vertices[i]);
    if (signs[w] == 0) {
      c.rel = Rel::Eq;
      c.rhs = 0;
    } else if (signs[w] > 0) {
      c.coeffs[m] = -1;  // sum >= t
      c.rel = Rel::Ge;
      c.rhs = 0;
      any_strict = true;
    } else {
      c.coeffs[m] = 1;  // sum <= -t
      c.rel = Rel::Le;
      c.rhs = 0;
      any_strict = true;
    }
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
  if (any_strict && res.value <= 0) return std::nullopt;
  RatVec gamma(K.vertices[0].size(), Rat(0));
  for (int i = 0; i < m; ++i)
    gamma = vec_add(gamma, vec_scale(res.x[i], K.vertices[i]));
  return gamma;
}

}  // namespace detail

// All realized sign-vector cells of the wall arrangement over hull(K),
// sorted by sign vector (lexicographic, -1 < 0 < +1).  Cells are built by
// extending sign prefixes one wall at a time; each candidate extension is an
// independent exact LP, checked in parallel with a deterministic merge.
inline std::vector<Chamber> decompose(const Region& K,
                                      const std::vector<IntVec>& normals) {
  if (K.vertices.empty())
    throw Error(ErrorCode::EmptyRegion, "cannot decompose an empty region");
  std::vector<std::vector<int>> prefixes{{}};
  std::vector<RatVec> points;
  {
    auto p0 = detail::cell_point(K, {}, {});
    if (!p0)
      throw Error(ErrorCode::EmptyRegion, "region LP is infeasible");
    points.push_back(*p0);
  }
  for (size_t w = 0; w < normals.size(); ++w) {
    const size_t cand = prefixes.size() * 3;
    std::vector<std::optional<std::pair<std::vector<int>, RatVec>>> slots(cand);
    std::vector<IntVec> used(normals.begin(), normals.begin() + w + 1);
    parallel_for(cand, [&](size_t idx) {
      size_t cell = idx / 3;
      int sign = static_cast<int>(idx % 3) - 1;  // -1, 0, +1
      std::vector<int> s = prefixes[cell];
      s.push_back(sign);
      auto pt = detail::cell_point(K, used, s);
      if (pt) slots[idx] = std::make_pair(std::move(s), std::move(*pt));
    });
    std::vector<std::vector<int>> next_p;
    std::vector<RatVec> next_pts;
    for (auto& slot : slots) {
      if (!slot) continue;
      next_p.push_back(std::move(slot->first));
      next_pts.push_back(std::move(slot->second));
    }
    prefixes = std::move(next_p);
    points = std::move(next_pts);
  }
  std::vector<Chamber> cells;
  for (size_t i = 0; i < prefixes.size(); ++i) {
    Chamber c;
    c.signs = prefixes[i];
    c.representative = points[i];
    c.full_dimensional = true;
    for (size_t w = 0; w < c.signs.size(); ++w)
      if (c.signs[w] == 0) {
        c.walls_active.push_back(static_cast<long>(w));
        c.full_dimensional = false;
      }
    cells.push_back(std::move(c));
  }
  std::sort(cells.begin(), cells.end(),
            [](const Chamber& a, const Chamber& b) { return a.signs < b.signs; });
  return cells;
}

// A vertex of the closure of the cell with the given sign pattern,
// maximizing an arbitrary objective over the convex vertex weights.  Mixing
// such vertices with a strict-interior representative yields exact sample
// points of the cell (zero signs stay exactly zero, strict signs stay strict).
inline std::optional<RatVec> cell_closure_vertex(const Region& K,
                                                 const std::vector<IntVec>& normals,
                                                 const std::vector<int>& signs,
                                                 const RatVec& weight_objective) {
  const int m = static_cast<int>(K.vertices.size());
  if (static_cast<int>(weight_objective.size()) != m)
    throw Error(ErrorCode::DimensionMismatch,
                "objective length must match the vertex count");
  LpProblem lp;
  lp.num_vars = m;
  {
    LpConstraint sum1;
    sum1.coeffs.assign(m, Rat(1));
    sum1.rel = Rel::Eq;
    sum1.rhs = 1;
    lp.constraints.push_back(std::move(sum1));
  }
  for (size_t w = 0; w < signs.size(); ++w) {
    LpConstraint c;
    c.coeffs.assign(m, Rat(0));
    RatVec nr = normal_rat(normals[w]);
    for (int i = 0; i < m; ++i) c.coeffs[i] = dot(nr, K.vertices[i]);
    c.rhs = 0;
    c.rel = signs[w] == 0 ? Rel::Eq : (signs[w] > 0 ? Rel::Ge : Rel::Le);
    lp.constraints.push_back(std::move(c));
  }
  lp.objective = weight_objective;
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  RatVec gamma(K.vertices[0].size(), Rat(0));
  for (int i = 0; i < m; ++i)
    gamma = vec_add(gamma, vec_scale(res.x[i], K.vertices[i]));
  return gamma;
}

// Index of the cell whose sign vector matches gamma, or -1.
inline long find_cell(const std::vector<Chamber>& cells,
                      const std::vector<IntVec>& normals, const RatVec& gamma) {
  std::vector<int> s = sign_vector(normals, gamma);
  for (size_t i = 0; i < cells.size(); ++i)
    if (cells[i].signs == s) return static_cast<long>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Segment crossings in curve coordinates (always linear, always rational).
// ---------------------------------------------------------------------------

struct CurveCrossing {
  Rat parameter;             // u in [0, 1]
  std::vector<long> walls;   // wall indices crossing at this parameter
};

struct CurveCrossingReport {
  std::vector<CurveCrossing> crossings;            // sorted by parameter
  std::vector<long> walls_containing_segment;      // a.g0 = a.g1 = 0
};

inline CurveCrossingReport segment_crossings_curve(const std::vector<IntVec>& normals,
                                                   const RatVec& g0, const RatVec& g1) {
  if (g0 == g1)
    throw Error(ErrorCode::PreconditionViolated,
                "segment endpoints must be distinct");
  CurveCrossingReport out;
  std::map<Rat, std::vector<long>> grouped;
  for (size_t w = 0; w < normals.size(); ++w) {
    RatVec nr = normal_rat(normals[w]);
    Rat a0 = dot(nr, g0);
    Rat a1 = dot(nr, g1);
    if (a0 == 0 && a1 == 0) {
      out.walls_containing_segment.push_back(static_cast<long>(w));
      continue;
    }
    if (a0 == a1) continue;  // constant nonzero along the segment
    Rat u = a0 / (a0 - a1);
    if (u >= 0 && u <= 1) grouped[u].push_back(static_cast<long>(w));
  }
  for (auto& [u, ws] : grouped) out.crossings.push_back({u, std::move(ws)});
  return out;
}

// ---------------------------------------------------------------------------
// Segment crossings along ample paths: exact degree-(n-1) polynomials.
// ---------------------------------------------------------------------------

struct CrossingParameter {
  bool is_rational = true;
  Rat value;                  // when rational
  AlgebraicNumber algebraic;  // when irrational
  int multiplicity = 1;
};

struct AmpCrossingResult {
  bool identically_zero = false;  // the wall contains the whole path image
  RatPoly path_polynomial;        // f(tau), ascending coefficients
  std::vector<CrossingParameter> crossings;  // sorted along the path
};

// f(tau) = a . ((1-tau) h0 + tau h1)^{n-1}, expanded exactly.
inline RatPoly wall_path_polynomial(const PolarisedLattice& L, const IntVec& normal,
                                    const DivisorClass& h0, const DivisorClass& h1) {
  const int n = L.dimension;
  RatVec nr = normal_rat(normal);
  RatPoly f;  // zero
  Rat binom(1);
  for (int k = 0; k <= n - 1; ++k) {
    // m_k = a . (h0^{n-1-k} h1^k)
    lattice::SymTensor t = L.form;
    for (int i = 0; i < n - 1 - k; ++i) t = t.contract(h0.coords);
    for (int i = 0; i < k; ++i) t = t.contract(h1.coords);
    Rat mk = dot(nr, t.as_vector());
    // term: C(n-1,k) m_k (1-tau)^{n-1-k} tau^k
    RatPoly term = {binom * mk};
    for (int i = 0; i < n - 1 - k; ++i) term = poly_mul(term, RatPoly{Rat(1), Rat(-1)});
    for (int i = 0; i < k; ++i) term = poly_mul(term, RatPoly{Rat(0), Rat(1)});
    f = poly_add(f, term);
    binom = binom * Rat(n - 1 - k) / Rat(k + 1);
  }
  return f;
}

namespace detail {

// Shrink an isolating interval until the rational point r lies outside it.
// r must not be the isolated root.
inline void exclude_rational(const std::vector<RatPoly>& chain, const RatPoly& p,
                             Rat& lo, Rat& hi, const Rat& r) {
  int guard = 0;
  while (lo < r && r < hi) {
    if (poly_eval(p, r) == 0)
      throw Error(ErrorCode::InternalInconsistency,
                  "cannot separate an isolating interval from one of its roots");
    if (sturm_count(chain, lo, r) == 1)
      hi = r;
    else
      lo = r;
    if (++guard > 4096)
      throw Error(ErrorCode::InternalInconsistency, "interval separation stalled");
  }
}

// Multiplicity of the isolated root of `alg` as a root of f.
inline int algebraic_multiplicity(const RatPoly& f, const AlgebraicNumber& alg) {
  RatPoly g;
  for (const Int& c : alg.minpoly) g.push_back(Rat(c));
  g = poly_trim(g);
  int mult = 0;
  RatPoly cur = f;
  while (poly_degree(cur) >= 0) {
    RatPoly shared = poly_gcd(cur, g);
    if (poly_degree(shared) < 1) break;
    std::vector<RatPoly> chain = sturm_chain(shared);
    if (sturm_count(chain, alg.lo, alg.hi) != 1) break;
    ++mult;
    cur = poly_derivative(cur);
  }
  return mult;
}

}  // namespace detail

// All real roots of f(tau) = normal . path(tau)^{n-1} in [0, 1], exact.
// Rational roots carry exact values and multiplicities; irrational roots are
// returned as square-free primitive integer polynomials with Sturm-certified
// isolating intervals (refined below max_width and separated from every
// rational root of f).
inline AmpCrossingResult segment_crossings_ample(
    const PolarisedLattice& L, const IntVec& normal, const DivisorClass& h0,
    const DivisorClass& h1, const Rat& max_width = Rat(1, 1 << 20)) {
  if (!lattice::is_in_ample_cone(L, h0, true) ||
      !lattice::is_in_ample_cone(L, h1, true))
    throw Error(ErrorCode::PreconditionViolated,
                "segment endpoints must be strictly ample");
  AmpCrossingResult out;
  out.path_polynomial = wall_path_polynomial(L, normal, h0, h1);
  if (poly_is_zero(out.path_polynomial)) {
    out.identically_zero = true;
    return out;
  }
  RatPoly work = out.path_polynomial;
  RatVec all_rational = rational_roots(work);
  std::vector<CrossingParameter> rats;
  for (const Rat& r : all_rational) {
    int mult = poly_deflate_root(work, r);
    if (r >= 0 && r <= 1) {
      CrossingParameter c;
      c.is_rational = true;
      c.value = r;
      c.multiplicity = mult;
      rats.push_back(std::move(c));
    }
  }
  std::vector<CrossingParameter> algs;
  RatPoly sf = poly_squarefree(work);
  if (poly_degree(sf) >= 1) {
    auto intervals = isolate_roots(sf, Rat(0), Rat(1), max_width);
    std::vector<RatPoly> chain = sturm_chain(sf);
    for (auto& [lo, hi] : intervals) {
      // Separate from every rational root so that ordering is exact.
      for (const Rat& r : all_rational)
        if (lo < r && r < hi) detail::exclude_rational(chain, sf, lo, hi, r);
      CrossingParameter c;
      c.is_rational = false;
      c.algebraic.minpoly = poly_to_primitive_int(sf);
      c.algebraic.lo = lo;
      c.algebraic.hi = hi;
      c.multiplicity = detail::algebraic_multiplicity(out.path_polynomial, c.algebraic);
      algs.push_back(std::move(c));
    }
  }
  // Merge, ordering rationals against isolating intervals exactly.
  auto key_lo = [](const CrossingParameter& c) {
    return c.is_rational ? c.value : c.algebraic.lo;
  };
  out.crossings = std::move(rats);
  for (auto& a : algs) out.crossings.push_back(std::move(a));
  std::sort(out.crossings.begin(), out.crossings.end(),
            [&](const CrossingParameter& a, const CrossingParameter& b) {
              Rat ka = key_lo(a), kb = key_lo(b);
              if (ka != kb) return ka < kb;
              // Equal keys: a rational r equal to an interval's lower bound
              // precedes the interval's (strictly greater) root.
              return a.is_rational && !b.is_rational;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinearity witnesses: three collinear strictly ample classes whose wall
// values alternate in sign, certifying that the pulled-back wall is not an
// affine hyperplane in the ample cone.
// ---------------------------------------------------------------------------

struct NonlinearitySample {
  Rat tau;      // parameter along the segment
  RatVec point; // (1-tau) h0 + tau h1
  int sign;     // exact sign of the path polynomial there
};

struct NonlinearityWitness {
  RatVec h0, h1;
  std::array<NonlinearitySample, 3> samples;
};

inline std::optional<NonlinearityWitness> nonlinearity_witness_on_segment(
    const PolarisedLattice& L, const IntVec& normal, const DivisorClass& h0,
    const DivisorClass& h1) {
  if (L.dimension < 3)
    throw Error(ErrorCode::PreconditionViolated,
                "nonlinearity witnesses require dimension >= 3 (wall pullbacks "
                "are linear on surfaces)");
  AmpCrossingResult cr = segment_crossings_ample(L, normal, h0, h1);
  if (cr.identically_zero) return std::nullopt;
  // Gap boundaries: [start, first root), between roots, (last root, end].
  struct Bound {
    Rat lo, hi;
  };
  std::vector<Bound> roots;
  for (const auto& c : cr.crossings) {
    if (c.is_rational) {
      if (c.value > 0 && c.value < 1) roots.push_back({c.value, c.value});
    } else {
      Rat lo = c.algebraic.lo, hi = c.algebraic.hi;
      // Push the interval strictly inside (0, 1) (the root is).
      RatPoly sf;
      for (const Int& cc : c.algebraic.minpoly) sf.push_back(Rat(cc));
      sf = poly_trim(sf);
      std::vector<RatPoly> chain = sturm_chain(sf);
      if (lo < 0) detail::exclude_rational(chain, sf, lo, hi, Rat(0));
      if (hi > 1) detail::exclude_rational(chain, sf, lo, hi, Rat(1));
      roots.push_back({lo, hi});
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const Bound& a, const Bound& b) { return a.lo < b.lo; });
  std::vector<Rat> samples;
  Rat prev(0);
  for (const auto& r : roots) {
    if (r.lo > prev) samples.push_back((prev + r.lo) / 2);
    prev = r.hi;
  }
  if (prev < 1) samples.push_back((prev + 1) / 2);
  // Evaluate exact signs, compress equal neighbours, look for alternation.
  std::vector<std::pair<Rat, int>> runs;
  for (const Rat& s : samples) {
    int sg = rat_sign(poly_eval(cr.path_polynomial, s));
    if (sg == 0) continue;  // cannot happen between separated roots; be safe
    if (runs.empty() || runs.back().second != sg) runs.emplace_back(s, sg);
  }
  if (runs.size() < 3) return std::nullopt;
  NonlinearityWitness w;
  w.h0 = h0.coords;
  w.h1 = h1.coords;
  for (int i = 0; i < 3; ++i) {
    const auto& [tau, sg] = runs[i];
    RatVec pt = vec_add(vec_scale(Rat(1) - tau, h0.coords), vec_scale(tau, h1.coords));
    w.samples[i] = NonlinearitySample{tau, pt, sg};
  }
  return w;
}

// Deterministic search over a family of generator-to-generator segments.
inline std::optional<NonlinearityWitness> nonlinearity_witness(
    const PolarisedLattice& L, const IntVec& normal) {
  if (L.dimension < 3)
    throw Error(ErrorCode::PreconditionViolated,
                "nonlinearity witnesses require dimension >= 3 (wall pullbacks "
                "are linear on surfaces)");
  if (L.rank < 2)
    throw Error(ErrorCode::PreconditionViolated,
                "nonlinearity witnesses require lattice rank >= 2");
  const auto& gens = L.ample_gens;
  const size_t m = gens.size();
  const std::vector<Rat> side_weights = {Rat(1, 4), Rat(1, 2), Rat(1, 10)};
  for (const Rat& wgt : side_weights) {
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        RatVec a(L.rank, Rat(0)), b(L.rank, Rat(0));
        for (size_t k = 0; k < m; ++k) {
          Rat ca, cb;
          if (k == i) {
            ca = 1;
            cb = Rat(1, 10);
          } else if (k == j) {
            ca = Rat(1, 10);
            cb = 1;
          } else {
            ca = wgt;
            cb = wgt;
          }
          a = vec_add(a, vec_scale(ca, gens[k]));
          b = vec_add(b, vec_scale(cb, gens[k]));
        }
        auto res = nonlinearity_witness_on_segment(L, normal, DivisorClass(a),
                                                   DivisorClass(b));
        if (res) return res;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Complete-intersection representative of a chamber point: integral ample
// classes A, B and a positive rational scale with
//   scale . (A^{n-2} . B) = gamma   (exactly).
// ---------------------------------------------------------------------------

struct ChamberRepresentative {
  IntVec a;      // integral ample class (outer factor, used n-2 times)
  IntVec b;      // integral ample class (inner factor)
  Rat scale;     // positive rational
  RatVec curve;  // the represented curve class (= input gamma)
};

namespace detail {

// Scale a nonzero rational vector to a primitive integer vector by a positive
// rational: returns (w, m) with w = m . v, m > 0.
inline std::pair<IntVec, Rat> positive_primitive(const RatVec& v) {
  Int den = common_denominator(v);
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat t = v[i] * Rat(den);
    w[i] = t.get_num();
  }
  Int c = content(w);
  if (c == 0)
    throw Error(ErrorCode::PreconditionViolated, "zero vector cannot be scaled");
  for (auto& x : w) x /= c;
  Rat m = Rat(den) / Rat(c);
  return {w, m};
}

}  // namespace detail

inline ChamberRepresentative chamber_representative(
    const PolarisedLattice& L, const RatVec& gamma,
    std::optional<DivisorClass> h_seed = std::nullopt,
    const std::vector<int>* expected_signs = nullptr,
    const std::vector<IntVec>* normals = nullptr) {
  const int n = L.dimension;
  DivisorClass h;
  if (h_seed) {
    h = *h_seed;
  } else {
    auto res = lattice::newton_invert_power(L, CurveClass(gamma));
    h = res.alpha;
  }
  const unsigned ladders[] = {4, 8, 16, 32, 64, 128, 256, 512};
  std::optional<DivisorClass> a_found, b_found;
  for (unsigned bits : ladders) {
    RatVec rounded(h.coords.size());
    for (size_t i = 0; i < h.coords.size(); ++i)
      rounded[i] = round_denominator(h.coords[i], bits);
    DivisorClass a(rounded);
    if (!lattice::is_in_ample_cone(L, a, true)) continue;
    Mat ma = lattice::lefschetz_map(L, a);
    if (determinant(ma) == 0) continue;
    auto bx = solve(ma, gamma);
    if (!bx) continue;
    DivisorClass b(*bx);
    if (!lattice::is_in_ample_cone(L, b, true)) continue;
    a_found = a;
    b_found = b;
    break;
  }
  if (!a_found)
    throw Error(ErrorCode::BNotAmple,
                "no rounding of the seed produced an ample pair (A, B) for "
                "the chamber point " + vec_str(gamma));
  auto [ai, am] = detail::positive_primitive(a_found->coords);
  auto [bi, bm] = detail::positive_primitive(b_found->coords);
  ChamberRepresentative rep;
  rep.a = ai;
  rep.b = bi;
  rep.curve = gamma;
  // A = ai / am, B = bi / bm, and A^{n-2} B = gamma exactly, so
  // (ai)^{n-2} (bi) = am^{n-2} bm . gamma.
  Rat factor(1);
  for (int i = 0; i < n - 2; ++i) factor *= am;
  factor *= bm;
  rep.scale = Rat(1) / factor;
  // Exact verification of the construction.
  lattice::SymTensor t = L.form;
  RatVec ar = normal_rat(ai), br = normal_rat(bi);
  for (int i = 0; i < n - 2; ++i) t = t.contract(ar);
  t = t.contract(br);
  RatVec check = vec_scale(rep.scale, t.as_vector());
  if (check != gamma)
    throw Error(ErrorCode::InternalInconsistency,
                "complete-intersection representative does not reproduce the "
                "chamber point");
  if (expected_signs && normals) {
    std::vector<int> got = sign_vector(*normals, check);
    if (got != *expected_signs)
      throw Error(ErrorCode::VerificationFailed,
                  "representative sign vector does not match the chamber");
  }
  return rep;
}

}  // namespace mwall::chambers
