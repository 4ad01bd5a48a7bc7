#ifndef MWALL_SHEAFMODEL_HPP
#define MWALL_SHEAFMODEL_HPP

// Slope-stability verdicts for explicitly presented sheaf-type objects.
//
// Two presentation kinds are supported.
//
//   * Direct sums of line classes: the summands are rank-1 numerical data
//     and the total is derived exactly -- ranks and first Chern classes add,
//     and the second Chern functional is the Whitney sum over unordered
//     pairs of summands, evaluated through the intersection form.  For such
//     presentations the maximal destabilising subobject with respect to any
//     curve class is the sum of the maximal-slope summands, so verdicts and
//     Harder-Narasimhan groupings are complete and exact.
//
//   * Filtered presentations: a total datum together with a list of declared
//     subobject data.  Verdicts are relative to the declared subobjects
//     only; this is a documented partial check (a genuine sheaf may be
//     destabilised by a subobject that was not declared).
//
// All slope comparisons are exact rational arithmetic, hence verdicts are
// decisions, not approximations: "properly semistable" means the maximal
// subobject slope equals the total slope exactly.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwall/chambers.hpp"
#include "mwall/errors.hpp"
#include "mwall/lattice.hpp"
#include "mwall/linalg.hpp"
#include "mwall/rational.hpp"
#include "mwall/rng.hpp"
#include "mwall/walls.hpp"

namespace mwall::sheafmodel {

using lattice::CurveClass;
using lattice::DivisorClass;
using lattice::PolarisedLattice;
using lattice::SymTensor;
using walls::Region;
using walls::SheafNumerics;

// ---------------------------------------------------------------------------
// Presentations.
// ---------------------------------------------------------------------------

enum class PresentationKind { DirectSum, Filtered };

inline std::string presentation_kind_str(PresentationKind k) {
  return k == PresentationKind::DirectSum ? "direct-sum" : "filtered";
}

struct PresentedSheaf {
  PresentationKind kind = PresentationKind::DirectSum;
  // Direct-sum presentations: the rank-1 summands.
  std::vector<SheafNumerics> summands;
  // Filtered presentations: the declared subobjects (each of intermediate
  // rank 0 < r_sub < r_total).
  std::vector<SheafNumerics> subobjects;
  // Derived (direct-sum) or declared (filtered) total numerical datum.
  SheafNumerics total;
  std::string label;
};

namespace detail {

// c2 functional of a direct sum of line classes with first Chern classes
// c1s: the Whitney pair sum  sum_{i<j} c1_i . c1_j . e_m  on every sorted
// basis multi-index m of order n-2.
inline SymTensor whitney_c2(const PolarisedLattice& L,
                            const std::vector<RatVec>& c1s) {
  SymTensor out(L.rank, L.dimension - 2);
  for (size_t i = 0; i < c1s.size(); ++i) {
    for (size_t j = i + 1; j < c1s.size(); ++j) {
      SymTensor pair_form = L.form.contract(c1s[i]).contract(c1s[j]);
      SymTensor::for_each_sorted_index(
          L.rank, L.dimension - 2, [&](const std::vector<int>& idx) {
            out.set(idx, out.value(idx) + pair_form.value(idx));
          });
    }
  }
  return out;
}

inline SymTensor zero_c2(const PolarisedLattice& L) {
  return SymTensor(L.rank, L.dimension - 2);
}

// Sum of a subset of rank-1 summands as a subobject datum.
inline SheafNumerics summand_sum(const PolarisedLattice& L,
                                 const std::vector<SheafNumerics>& summands,
                                 const std::vector<size_t>& indices,
                                 const std::string& label) {
  SheafNumerics out;
  out.rank = static_cast<long>(indices.size());
  out.c1.assign(static_cast<size_t>(L.rank), Int(0));
  std::vector<RatVec> c1s;
  c1s.reserve(indices.size());
  for (size_t k : indices) {
    const SheafNumerics& s = summands[k];
    for (size_t i = 0; i < out.c1.size(); ++i) out.c1[i] += s.c1[i];
    c1s.push_back(walls::c1_rat(s));
  }
  out.c2 = whitney_c2(L, c1s);
  out.label = label;
  return out;
}

}  // namespace detail

// Build a direct-sum presentation from the integral first Chern classes of
// its line-class summands.  The total is derived: ranks and c1 add, and the
// c2 functional is the exact Whitney pair sum.
inline PresentedSheaf make_direct_sum(const PolarisedLattice& L,
                                      const std::vector<IntVec>& summand_c1,
                                      const std::string& label = "") {
  if (summand_c1.empty())
    throw Error(ErrorCode::PreconditionViolated,
                "a direct-sum presentation needs at least one summand");
  PresentedSheaf F;
  F.kind = PresentationKind::DirectSum;
  F.label = label;
  for (size_t k = 0; k < summand_c1.size(); ++k) {
    if (static_cast<int>(summand_c1[k].size()) != L.rank)
      throw Error(ErrorCode::DimensionMismatch,
                  "summand c1 length does not match lattice rank");
    SheafNumerics s;
    s.rank = 1;
    s.c1 = summand_c1[k];
    s.c2 = detail::zero_c2(L);
    s.label = "summand " + std::to_string(k);
    F.summands.push_back(std::move(s));
  }
  std::vector<size_t> all(summand_c1.size());
  for (size_t k = 0; k < all.size(); ++k) all[k] = k;
  F.total = detail::summand_sum(L, F.summands, all,
                                label.empty() ? "total" : label);
  return F;
}

// Build a filtered presentation from a declared total and declared
// subobjects.  The verdict for such a presentation is relative to the
// declared subobjects only.
inline PresentedSheaf make_filtered(const PolarisedLattice& L,
                                    const SheafNumerics& total,
                                    const std::vector<SheafNumerics>& subobjects,
                                    const std::string& label = "") {
  walls::validate_sheaf(L, total);
  PresentedSheaf F;
  F.kind = PresentationKind::Filtered;
  F.total = total;
  F.label = label.empty() ? total.label : label;
  for (const SheafNumerics& sub : subobjects) {
    walls::validate_sheaf(L, sub);
    if (sub.rank >= total.rank)
      throw Error(ErrorCode::PreconditionViolated,
                  "declared subobjects must have rank strictly below the total");
    F.subobjects.push_back(sub);
  }
  return F;
}

// Structural validation; recomputes the derived total of a direct sum and
// reports corruption as InternalInconsistency.
inline void validate_presented(const PolarisedLattice& L,
                               const PresentedSheaf& F) {
  walls::validate_sheaf(L, F.total);
  if (F.kind == PresentationKind::DirectSum) {
    if (F.summands.empty())
      throw Error(ErrorCode::PreconditionViolated,
                  "a direct-sum presentation needs at least one summand");
    long rank_sum = 0;
    for (const SheafNumerics& s : F.summands) {
      walls::validate_sheaf(L, s);
      if (s.rank != 1)
        throw Error(ErrorCode::PreconditionViolated,
                    "direct-sum summands must be line classes (rank 1)");
      rank_sum += s.rank;
    }
    std::vector<size_t> all(F.summands.size());
    for (size_t k = 0; k < all.size(); ++k) all[k] = k;
    SheafNumerics derived =
        detail::summand_sum(L, F.summands, all, F.total.label);
    bool ok = derived.rank == F.total.rank && derived.c1 == F.total.c1;
    if (ok) {
      SymTensor::for_each_sorted_index(
          L.rank, L.dimension - 2, [&](const std::vector<int>& idx) {
            if (derived.c2.value(idx) != F.total.c2.value(idx)) ok = false;
          });
    }
    if (!ok)
      throw Error(ErrorCode::InternalInconsistency,
                  "direct-sum total does not match the sum of its summands");
    (void)rank_sum;
  } else {
    for (const SheafNumerics& sub : F.subobjects) {
      walls::validate_sheaf(L, sub);
      if (sub.rank >= F.total.rank)
        throw Error(ErrorCode::PreconditionViolated,
                    "declared subobjects must have rank strictly below the total");
    }
  }
}

// ---------------------------------------------------------------------------
// Verdicts.
// ---------------------------------------------------------------------------

enum class Stability { Stable, ProperlySemistable, Unstable };

inline std::string stability_str(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::ProperlySemistable: return "properly-semistable";
    case Stability::Unstable: return "unstable";
  }
  return "unstable";
}

struct Verdict {
  Stability status = Stability::Stable;
  Rat total_slope;
  // Exact slope gap max_subobject_slope - total_slope; zero when there is
  // no candidate subobject at all.
  Rat gap;
  bool has_witness = false;
  // The maximal destabilising subobject datum: for direct sums, the sum of
  // all maximal-slope summands; for filtered presentations, the first
  // declared subobject attaining the maximal slope.
  SheafNumerics witness;
  // Indices (into summands resp. subobjects) attaining the maximal slope.
  std::vector<size_t> witness_indices;
};

inline bool same_witness(const Verdict& a, const Verdict& b) {
  return a.status == b.status && a.has_witness == b.has_witness &&
         a.witness_indices == b.witness_indices;
}

// Slope-stability verdict of a presentation with respect to the curve class
// gamma.  Exact: the status is decided by the sign of the exact rational
// slope gap.  For a direct sum the check is complete (the maximal
// destabiliser among summand-generated subobjects is the sum of the
// maximal-slope summands); for a filtered presentation it is relative to
// the declared subobjects.
inline Verdict verdict(const PolarisedLattice& L, const PresentedSheaf& F,
                       const CurveClass& gamma) {
  validate_presented(L, F);
  Verdict out;
  out.total_slope = walls::slope(F.total, gamma);
  const std::vector<SheafNumerics>& candidates =
      F.kind == PresentationKind::DirectSum ? F.summands : F.subobjects;
  if (F.kind == PresentationKind::DirectSum && candidates.size() == 1) {
    // A single line class has no proper nonzero subobject in the model.
    out.status = Stability::Stable;
    return out;
  }
  if (candidates.empty()) {
    // Filtered presentation with no declared subobjects: nothing to test
    // against, so the relative verdict is stable.
    out.status = Stability::Stable;
    return out;
  }
  Rat max_slope;
  bool first = true;
  std::vector<size_t> argmax;
  for (size_t k = 0; k < candidates.size(); ++k) {
    Rat mu = walls::slope(candidates[k], gamma);
    if (first || mu > max_slope) {
      max_slope = mu;
      argmax.assign(1, k);
      first = false;
    } else if (mu == max_slope) {
      argmax.push_back(k);
    }
  }
  out.gap = max_slope - out.total_slope;
  out.has_witness = true;
  out.witness_indices = argmax;
  if (F.kind == PresentationKind::DirectSum) {
    out.witness =
        detail::summand_sum(L, F.summands, argmax, "maximal-slope summands");
  } else {
    out.witness = F.subobjects[argmax.front()];
  }
  int sgn = out.gap > 0 ? 1 : (out.gap < 0 ? -1 : 0);
  out.status = sgn > 0 ? Stability::Unstable
                       : (sgn == 0 ? Stability::ProperlySemistable
                                   : Stability::Stable);
  return out;
}

// ---------------------------------------------------------------------------
// Harder-Narasimhan grouping of a direct sum.
// ---------------------------------------------------------------------------

struct HnGroup {
  Rat slope;
  long rank = 0;
  IntVec c1;
  // Summand indices in canonical order (sorted by c1 lexicographically,
  // then by label), so that regrouping after any permutation of the input
  // summands produces identical groups.
  std::vector<size_t> members;
};

inline std::vector<HnGroup> hn_filtration(const PolarisedLattice& L,
                                          const PresentedSheaf& F,
                                          const CurveClass& gamma) {
  validate_presented(L, F);
  if (F.kind != PresentationKind::DirectSum)
    throw Error(ErrorCode::PreconditionViolated,
                "Harder-Narasimhan grouping is defined for direct-sum "
                "presentations");
  std::vector<size_t> order(F.summands.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::vector<Rat> slopes(F.summands.size());
  for (size_t k = 0; k < slopes.size(); ++k)
    slopes[k] = walls::slope(F.summands[k], gamma);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (slopes[a] != slopes[b]) return slopes[a] > slopes[b];
    if (F.summands[a].c1 != F.summands[b].c1)
      return F.summands[a].c1 < F.summands[b].c1;
    return F.summands[a].label < F.summands[b].label;
  });
  std::vector<HnGroup> groups;
  for (size_t pos = 0; pos < order.size();) {
    size_t end = pos;
    while (end < order.size() && slopes[order[end]] == slopes[order[pos]])
      ++end;
    HnGroup g;
    g.slope = slopes[order[pos]];
    g.rank = static_cast<long>(end - pos);
    g.c1.assign(static_cast<size_t>(L.rank), Int(0));
    for (size_t t = pos; t < end; ++t) {
      g.members.push_back(order[t]);
      for (size_t i = 0; i < g.c1.size(); ++i)
        g.c1[i] += F.summands[order[t]].c1[i];
    }
    groups.push_back(std::move(g));
    pos = end;
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Slope-crossing parameter along a segment of curve classes.
// ---------------------------------------------------------------------------

enum class SlopeCrossingStatus {
  // mu(sub) = mu(total) at exactly one parameter u* in [0, 1].
  Found,
  // The slopes differ at every parameter of the segment.
  NoCrossing,
  // zeta = r_total c1(sub) - r_sub c1(total) vanishes: the slopes agree for
  // every curve class whatsoever.
  IdenticallyEqual,
  // zeta is nonzero but annihilates both endpoints: the slopes agree along
  // the whole segment (the segment lies inside the wall of zeta).
  EqualOnSegment,
};

inline std::string slope_crossing_status_str(SlopeCrossingStatus s) {
  switch (s) {
    case SlopeCrossingStatus::Found: return "found";
    case SlopeCrossingStatus::NoCrossing: return "no-crossing";
    case SlopeCrossingStatus::IdenticallyEqual: return "identically-equal";
    case SlopeCrossingStatus::EqualOnSegment: return "equal-on-segment";
  }
  return "no-crossing";
}

struct SlopeCrossing {
  SlopeCrossingStatus status = SlopeCrossingStatus::NoCrossing;
  // The crossing parameter u* (meaningful only when status == Found).
  Rat parameter;
  // The integral wall class r_total c1(sub) - r_sub c1(total).
  IntVec zeta;
};

// Exact parameter u* in [0, 1] at which mu(sub; gamma_u) = mu(total;
// gamma_u) along gamma_u = (1-u) gamma0 + u gamma1.  Slope equality is the
// linear equation zeta . gamma_u = 0 with zeta = r_total c1(sub) - r_sub
// c1(total), so the parameter is an exact rational when it exists.
inline SlopeCrossing crossing_parameter(const SheafNumerics& sub,
                                        const SheafNumerics& total,
                                        const CurveClass& gamma0,
                                        const CurveClass& gamma1) {
  if (sub.rank < 1 || sub.rank >= total.rank)
    throw Error(ErrorCode::PreconditionViolated,
                "the subobject rank must satisfy 0 < r_sub < r_total");
  if (sub.c1.size() != total.c1.size() ||
      gamma0.coords.size() != sub.c1.size() ||
      gamma1.coords.size() != sub.c1.size())
    throw Error(ErrorCode::DimensionMismatch,
                "c1 and curve-class lengths must agree");
  SlopeCrossing out;
  out.zeta.resize(sub.c1.size());
  for (size_t i = 0; i < sub.c1.size(); ++i)
    out.zeta[i] = Int(total.rank) * sub.c1[i] - Int(sub.rank) * total.c1[i];
  bool zero = true;
  for (const Int& z : out.zeta)
    if (z != 0) zero = false;
  if (zero) {
    out.status = SlopeCrossingStatus::IdenticallyEqual;
    return out;
  }
  RatVec zr(out.zeta.size());
  for (size_t i = 0; i < zr.size(); ++i) zr[i] = Rat(out.zeta[i]);
  Rat a0 = dot(zr, gamma0.coords);
  Rat a1 = dot(zr, gamma1.coords);
  if (a0 == 0 && a1 == 0) {
    out.status = SlopeCrossingStatus::EqualOnSegment;
    return out;
  }
  if (a0 == a1) {
    out.status = SlopeCrossingStatus::NoCrossing;
    return out;
  }
  Rat u = a0 / (a0 - a1);
  if (u < 0 || u > 1) {
    out.status = SlopeCrossingStatus::NoCrossing;
    return out;
  }
  out.status = SlopeCrossingStatus::Found;
  out.parameter = u;
  return out;
}

// ---------------------------------------------------------------------------
// Chamber constancy of verdicts.
// ---------------------------------------------------------------------------

struct ConstancySample {
  RatVec point;
  Verdict sample_verdict;
};

struct ConstancyViolation {
  RatVec point_a;
  Verdict verdict_a;
  RatVec point_b;
  Verdict verdict_b;
};

struct ConstancyReport {
  bool constant = true;
  RatVec base_point;
  Verdict base_verdict;
  std::vector<ConstancySample> samples;
  // Present exactly when constant == false: the two exact rational points
  // of the same cell at which the verdicts differ.
  std::optional<ConstancyViolation> violation;
};

// Checks that the verdict of F is literally constant on a cell of a wall
// decomposition: the status (and, on full-dimensional cells, the witness
// set) must agree between the cell representative and deterministic exact
// rational sample points of the cell.  Sample points are produced by mixing
// the representative towards seeded random vertices of the cell closure;
// zero-sign constraints stay exactly zero and strict constraints stay
// strict, so every sample provably lies in the same cell.
inline ConstancyReport chamber_constancy_check(
    const PolarisedLattice& L, const PresentedSheaf& F, const Region& K,
    const std::vector<IntVec>& normals, const chambers::Chamber& cell,
    int samples = 8, std::uint64_t seed = 0) {
  walls::validate_region(L, K);
  if (samples < 1)
    throw Error(ErrorCode::PreconditionViolated,
                "at least one sample point is required");
  ConstancyReport report;
  report.base_point = cell.representative;
  report.base_verdict = verdict(L, F, CurveClass{cell.representative});
  Rng rng(seed);
  const size_t m = K.vertices.size();
  for (int t = 0; t < samples; ++t) {
    RatVec objective(m);
    for (size_t i = 0; i < m; ++i) objective[i] = Rat(rng.integer(-9, 9));
    std::optional<RatVec> vertex =
        chambers::cell_closure_vertex(K, normals, cell.signs, objective);
    if (!vertex)
      throw Error(ErrorCode::InternalInconsistency,
                  "cell closure became infeasible while sampling");
    Rat theta(rng.integer(1, 15), 16);
    RatVec point = vec_add(vec_scale(1 - theta, report.base_point),
                           vec_scale(theta, *vertex));
    ConstancySample cs;
    cs.point = point;
    cs.sample_verdict = verdict(L, F, CurveClass{point});
    bool agree = cs.sample_verdict.status == report.base_verdict.status;
    if (agree && cell.full_dimensional)
      agree = same_witness(cs.sample_verdict, report.base_verdict);
    if (!agree && report.constant) {
      report.constant = false;
      report.violation = ConstancyViolation{report.base_point,
                                            report.base_verdict, point,
                                            cs.sample_verdict};
    }
    report.samples.push_back(std::move(cs));
  }
  return report;
}

}  // namespace mwall::sheafmodel

#endif  // MWALL_SHEAFMODEL_HPP
