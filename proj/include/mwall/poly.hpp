#ifndef MWALL_POLY_HPP
#define MWALL_POLY_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "mwall/errors.hpp"
#include "mwall/rational.hpp"

namespace mwall {

// Univariate polynomials with exact rational coefficients, stored low degree
// first. Used for ample-segment crossing polynomials and their certified real
// roots (Sturm sequences over Q).
using RatPoly = RatVec;

inline RatPoly poly_trim(RatPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline int poly_degree(const RatPoly& p) {
  for (size_t i = p.size(); i-- > 0;)
    if (p[i] != 0) return static_cast<int>(i);
  return -1;
}

inline bool poly_is_zero(const RatPoly& p) { return poly_degree(p) < 0; }

inline Rat poly_eval(const RatPoly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline RatPoly poly_derivative(const RatPoly& p) {
  if (p.size() <= 1) return {};
  RatPoly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rat(static_cast<long>(i));
  return d;
}

inline RatPoly poly_add(const RatPoly& a, const RatPoly& b) {
  RatPoly out(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return poly_trim(out);
}

inline RatPoly poly_scale(const Rat& c, const RatPoly& a) {
  RatPoly out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return poly_trim(out);
}

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
  if (poly_is_zero(a) || poly_is_zero(b)) return {};
  RatPoly out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return poly_trim(out);
}

// Euclidean division a = q b + r, deg r < deg b.
inline std::pair<RatPoly, RatPoly> poly_divrem(RatPoly a, const RatPoly& b) {
  int db = poly_degree(b);
  if (db < 0) throw Error(ErrorCode::DimensionMismatch, "poly division by zero");
  a = poly_trim(std::move(a));
  RatPoly q;
  while (poly_degree(a) >= db) {
    int da = poly_degree(a);
    Rat c = a[da] / b[db];
    size_t shift = static_cast<size_t>(da - db);
    if (q.size() < shift + 1) q.resize(shift + 1, Rat(0));
    q[shift] = c;
    for (int i = 0; i <= db; ++i) a[shift + static_cast<size_t>(i)] -= c * b[static_cast<size_t>(i)];
    a = poly_trim(std::move(a));
  }
  return {poly_trim(std::move(q)), a};
}

inline RatPoly poly_monic(RatPoly p) {
  int d = poly_degree(p);
  if (d < 0) return p;
  Rat lead = p[static_cast<size_t>(d)];
  for (Rat& c : p) c /= lead;
  return poly_trim(std::move(p));
}

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!poly_is_zero(b)) {
    RatPoly r = poly_divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(std::move(a));
}

// p / gcd(p, p'): same distinct roots, all simple.
inline RatPoly poly_squarefree(const RatPoly& p) {
  if (poly_degree(p) <= 0) return poly_trim(p);
  RatPoly g = poly_gcd(p, poly_derivative(p));
  if (poly_degree(g) <= 0) return poly_trim(p);
  return poly_divrem(p, g).first;
}

// Clear denominators and content, make leading coefficient positive.
inline IntVec poly_to_primitive_int(const RatPoly& p) {
  RatPoly q = poly_trim(p);
  if (q.empty()) return {};
  Int den = common_denominator(q);
  IntVec out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[i] = Rat(q[i] * den).get_num();
  Int c = content(out);
  if (c != 0)
    for (Int& v : out) v /= c;
  if (out.back() < 0)
    for (Int& v : out) v = -v;
  return out;
}

inline RatPoly poly_from_int(const IntVec& p) {
  RatPoly out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = Rat(p[i]);
  return poly_trim(out);
}

// Canonical Sturm chain of a polynomial.
inline std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  chain.push_back(poly_trim(p));
  chain.push_back(poly_derivative(p));
  while (poly_degree(chain.back()) > 0) {
    const RatPoly& s0 = chain[chain.size() - 2];
    const RatPoly& s1 = chain.back();
    RatPoly r = poly_divrem(s0, s1).second;
    if (poly_is_zero(r)) break;
    for (Rat& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

inline int sign_of(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline int sturm_variations(const std::vector<RatPoly>& chain, const Rat& x) {
  int var = 0, prev = 0;
  for (const RatPoly& s : chain) {
    int sg = sign_of(poly_eval(s, x));
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++var;
    prev = sg;
  }
  return var;
}

// Number of distinct real roots in the half-open interval (a, b].
inline int sturm_count(const std::vector<RatPoly>& chain, const Rat& a, const Rat& b) {
  return sturm_variations(chain, a) - sturm_variations(chain, b);
}

// All rational roots of p (each once), via the rational root theorem on the
// primitive integer form. Exact; suitable for the small degrees used here.
inline RatVec rational_roots(const RatPoly& p) {
  RatVec roots;
  RatPoly q = poly_trim(p);
  if (poly_degree(q) <= 0) return roots;
  // Factor out x^k.
  size_t k = 0;
  while (k < q.size() && q[k] == 0) ++k;
  if (k > 0) {
    roots.push_back(Rat(0));
    q.erase(q.begin(), q.begin() + static_cast<long>(k));
  }
  IntVec ip = poly_to_primitive_int(q);
  if (ip.size() <= 1) return roots;
  Int a0 = abs(ip.front());
  Int an = abs(ip.back());
  if (a0 == 0) return roots;  // handled above
  std::vector<Int> ps, qs;
  for (Int d = 1; d * d <= a0; ++d)
    if (a0 % d == 0) { ps.push_back(d); if (d * d != a0) ps.push_back(a0 / d); }
  for (Int d = 1; d * d <= an; ++d)
    if (an % d == 0) { qs.push_back(d); if (d * d != an) qs.push_back(an / d); }
  std::vector<Rat> seen;
  for (const Int& pn : ps)
    for (const Int& qd : qs)
      for (int sgn : {1, -1}) {
        Rat cand(sgn * pn, qd);
        cand.canonicalize();
        bool dup = false;
        for (const Rat& s : seen)
          if (s == cand) { dup = true; break; }
        if (dup) continue;
        seen.push_back(cand);
        if (poly_eval(q, cand) == 0) roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Divide out (x - r) as many times as it divides p; returns multiplicity.
inline int poly_deflate_root(RatPoly& p, const Rat& r) {
  int mult = 0;
  RatPoly lin = {-r, Rat(1)};
  for (;;) {
    auto [q, rem] = poly_divrem(p, lin);
    if (!poly_is_zero(rem)) break;
    p = std::move(q);
    ++mult;
    if (poly_degree(p) < 1) break;
  }
  return mult;
}

// A real algebraic number, certified: the (square-free, primitive, positive
// leading) defining polynomial has exactly one root in (lo, hi), by Sturm.
struct AlgebraicNumber {
  IntVec minpoly;  // ascending, x^0 first
  Rat lo, hi;      // open isolating interval, lo < value < hi
};

// Bisect an isolating interval until its width is at most `width`.
inline void refine_interval(const std::vector<RatPoly>& chain, const RatPoly& p, Rat& lo, Rat& hi,
                            const Rat& width) {
  while (hi - lo > width) {
    Rat mid = (lo + hi) / 2;
    if (poly_eval(p, mid) == 0) {
      // Rational midpoint root cannot occur for the rational-root-free
      // polynomials this is called with; re-split asymmetrically if it does.
      mid = lo + (hi - lo) / 3;
      if (poly_eval(p, mid) == 0) throw Error(ErrorCode::InternalInconsistency, "refine hit a rational root");
    }
    if (sturm_count(chain, lo, mid) == 1) hi = mid;
    else lo = mid;
  }
}

// Isolate all real roots of a square-free p inside (lo, hi); endpoints must
// not be roots. Returned intervals are disjoint, each certified to hold
// exactly one root, each refined to width <= max_width.
inline std::vector<std::pair<Rat, Rat>> isolate_roots(const RatPoly& p, Rat lo, Rat hi,
                                                      const Rat& max_width) {
  std::vector<std::pair<Rat, Rat>> out;
  if (poly_degree(p) <= 0) return out;
  if (poly_eval(p, lo) == 0 || poly_eval(p, hi) == 0)
    throw Error(ErrorCode::InternalInconsistency, "isolate_roots endpoints must not be roots");
  std::vector<RatPoly> chain = sturm_chain(p);
  std::vector<std::pair<Rat, Rat>> work{{lo, hi}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    int cnt = sturm_count(chain, a, b);
    if (cnt == 0) continue;
    if (cnt == 1) {
      Rat l = a, h = b;
      refine_interval(chain, p, l, h, max_width);
      out.emplace_back(l, h);
      continue;
    }
    Rat mid = (a + b) / 2;
    int guard = 0;
    while (poly_eval(p, mid) == 0) {
      // Perturb off a rational root (the caller deflates those first, but be safe).
      mid = a + (b - a) * Rat(1, 3 + guard);
      if (++guard > 64) throw Error(ErrorCode::InternalInconsistency, "isolate_roots split failure");
    }
    work.emplace_back(a, mid);
    work.emplace_back(mid, b);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace mwall

#endif  // MWALL_POLY_HPP
