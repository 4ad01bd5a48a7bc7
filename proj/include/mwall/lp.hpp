#ifndef MWALL_LP_HPP
#define MWALL_LP_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "mwall/errors.hpp"
#include "mwall/linalg.hpp"
#include "mwall/rational.hpp"

namespace mwall {

// Exact rational linear programming, two-phase primal simplex with Bland's
// rule (termination guaranteed; all pivots exact). All decision variables are
// nonnegative, which covers every use in this library (cone coefficients,
// convex weights, margin variables).

enum class Rel { Le, Ge, Eq };

struct LpConstraint {
  RatVec coeffs;
  Rel rel;
  Rat rhs;
};

struct LpProblem {
  size_t num_vars = 0;
  std::vector<LpConstraint> constraints;
  RatVec objective;  // maximize objective . x ; empty means pure feasibility
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec x;
  Rat value = 0;
};

namespace detail {

struct Tableau {
  Mat a;                     // m x n coefficient rows
  RatVec b;                  // m rhs, kept >= 0
  std::vector<size_t> basis; // m basic column indices
  size_t n = 0;

  // Pivot so column `enter` becomes basic in row `row`.
  void pivot(size_t row, size_t enter) {
    Rat inv = Rat(1) / a[row][enter];
    for (size_t j = 0; j < n; ++j) a[row][j] *= inv;
    b[row] *= inv;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][enter] == 0) continue;
      Rat f = a[i][enter];
      for (size_t j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = enter;
  }
};

// Maximize c.x over the tableau's feasible region starting from the current
// basic feasible solution. `allowed[j]` masks usable columns (artificials are
// disabled in phase 2). Returns false when unbounded.
inline bool simplex_max(Tableau& t, const RatVec& c, const std::vector<bool>& allowed) {
  size_t m = t.a.size();
  for (;;) {
    // Reduced costs via basic-cost combination: z_j = cb . B^{-1} A_j; the
    // tableau is kept fully reduced, so z_j = sum_i c[basis_i] * a[i][j].
    RatVec cb(m);
    for (size_t i = 0; i < m; ++i) cb[i] = c[t.basis[i]];
    size_t enter = t.n;
    for (size_t j = 0; j < t.n; ++j) {
      if (!allowed[j]) continue;
      Rat zj = 0;
      for (size_t i = 0; i < m; ++i)
        if (t.a[i][j] != 0) zj += cb[i] * t.a[i][j];
      if (c[j] - zj > 0) { enter = j; break; }  // Bland: first improving index
    }
    if (enter == t.n) return true;  // optimal
    size_t leave = m;
    Rat best = 0;
    for (size_t i = 0; i < m; ++i) {
      if (t.a[i][enter] <= 0) continue;
      Rat ratio = t.b[i] / t.a[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return false;  // unbounded direction
    t.pivot(leave, enter);
  }
}

}  // namespace detail

inline LpResult lp_solve(const LpProblem& p) {
  using detail::Tableau;
  size_t m = p.constraints.size();
  size_t n0 = p.num_vars;
  for (const auto& c : p.constraints)
    if (c.coeffs.size() != n0) throw Error(ErrorCode::DimensionMismatch, "lp constraint width");
  if (!p.objective.empty() && p.objective.size() != n0)
    throw Error(ErrorCode::DimensionMismatch, "lp objective width");

  // Count extension columns: one slack/surplus per inequality, one artificial
  // per Ge/Eq row (and per Le row with negative rhs after normalization).
  size_t n_slack = 0;
  for (const auto& c : p.constraints)
    if (c.rel != Rel::Eq) ++n_slack;
  size_t n = n0 + n_slack + m;  // reserve an artificial slot per row (some unused)
  Tableau t;
  t.n = n;
  t.a = make_mat(m, n);
  t.b = RatVec(m, Rat(0));
  t.basis.assign(m, size_t(0));
  std::vector<bool> is_artificial(n, false);

  size_t slack_at = n0;
  size_t art_at = n0 + n_slack;
  std::vector<size_t> art_cols;
  for (size_t i = 0; i < m; ++i) {
    const auto& c = p.constraints[i];
    RatVec row = c.coeffs;
    Rat rhs = c.rhs;
    Rel rel = c.rel;
    if (rhs < 0) {  // normalize rhs >= 0
      for (Rat& v : row) v = -v;
      rhs = -rhs;
      if (rel == Rel::Le) rel = Rel::Ge;
      else if (rel == Rel::Ge) rel = Rel::Le;
    }
    for (size_t j = 0; j < n0; ++j) t.a[i][j] = row[j];
    t.b[i] = rhs;
    bool need_artificial = true;
    if (rel == Rel::Le) {
      t.a[i][slack_at] = 1;
      t.basis[i] = slack_at;
      need_artificial = false;
      ++slack_at;
    } else if (rel == Rel::Ge) {
      t.a[i][slack_at] = -1;  // surplus
      ++slack_at;
    }
    if (need_artificial) {
      t.a[i][art_at] = 1;
      t.basis[i] = art_at;
      is_artificial[art_at] = true;
      art_cols.push_back(art_at);
      ++art_at;
    }
  }

  std::vector<bool> allow_all(n, true);
  if (!art_cols.empty()) {
    // Phase 1: maximize -sum(artificials).
    RatVec c1(n, Rat(0));
    for (size_t j : art_cols) c1[j] = -1;
    if (!detail::simplex_max(t, c1, allow_all))
      throw Error(ErrorCode::InternalInconsistency, "phase-1 simplex unbounded");
    Rat v = 0;
    for (size_t i = 0; i < m; ++i)
      if (is_artificial[t.basis[i]]) v += t.b[i];
    if (v != 0) return LpResult{LpStatus::Infeasible, {}, Rat(0)};
    // Drive remaining zero-level artificials out of the basis when possible.
    for (size_t i = 0; i < m; ++i) {
      if (!is_artificial[t.basis[i]]) continue;
      size_t enter = n;
      for (size_t j = 0; j < n && enter == n; ++j)
        if (!is_artificial[j] && t.a[i][j] != 0) enter = j;
      if (enter != n) t.pivot(i, enter);
      // else: redundant row; harmless to leave (stays at level 0).
    }
  }

  // Phase 2.
  RatVec c2(n, Rat(0));
  for (size_t j = 0; j < p.objective.size(); ++j) c2[j] = p.objective[j];
  std::vector<bool> allowed(n, true);
  for (size_t j = 0; j < n; ++j)
    if (is_artificial[j]) allowed[j] = false;
  if (!detail::simplex_max(t, c2, allowed)) return LpResult{LpStatus::Unbounded, {}, Rat(0)};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x = RatVec(n0, Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (t.basis[i] < n0) res.x[t.basis[i]] = t.b[i];
  res.value = 0;
  for (size_t j = 0; j < p.objective.size(); ++j) res.value += p.objective[j] * res.x[j];
  return res;
}

// Convenience: pure feasibility.
inline std::optional<RatVec> lp_feasible_point(LpProblem p) {
  p.objective.assign(p.num_vars, Rat(0));
  LpResult r = lp_solve(p);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return r.x;
}

}  // namespace mwall

#endif  // MWALL_LP_HPP
