#ifndef MWALL_RATIONAL_HPP
#define MWALL_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "mwall/errors.hpp"

namespace mwall {

// Exact rational scalar. All arithmetic in the library is done in Rat;
// no floating point enters any certified value.
using Rat = mpq_class;
using Int = mpz_class;

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

// Parse "p" or "p/q" (q > 0 after canonicalization). Decimal notation is
// rejected on purpose: serialized values must round-trip bit-exactly.
inline Rat parse_rat(const std::string& s, const std::string& where = "") {
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational" + (where.empty() ? "" : " at " + where));
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '/';
    if (!ok)
      throw Error(ErrorCode::ParseError,
                  "malformed rational \"" + s + "\"" + (where.empty() ? "" : " at " + where) +
                      " (decimal or non-integer notation is not accepted)");
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw Error(ErrorCode::ParseError, "malformed rational \"" + s + "\"" + (where.empty() ? "" : " at " + where));
  if (q.get_den() == 0)
    throw Error(ErrorCode::ParseError, "zero denominator in \"" + s + "\"" + (where.empty() ? "" : " at " + where));
  q.canonicalize();
  return q;
}

// Canonical serialization: "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

inline Rat abs_rat(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Nearest rational with denominator dividing 2^bits (ties round away from zero).
// Used to cap coefficient growth in Newton iterations.
inline Rat round_denominator(const Rat& x, unsigned bits) {
  Int scale = Int(1) << bits;
  Int num = x.get_num() * scale;
  const Int& den = x.get_den();
  // round(num/den) with half-away-from-zero ties.
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Int twice = abs(r) * 2;
  if (twice >= den) q += (num < 0 ? -1 : 1);
  Rat out(q, scale);
  out.canonicalize();
  return out;
}

// Largest integer t with t <= x.
inline Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

// Largest integer t with t^2 <= r (requires r >= 0): exact floor of sqrt.
inline Int floor_sqrt(const Rat& r) {
  if (r < 0) throw Error(ErrorCode::InternalInconsistency, "floor_sqrt of negative value");
  Int approx;  // floor(sqrt(floor(r))) is within 1 of the answer; fix up exactly.
  Int fl = floor_rat(r);
  mpz_sqrt(approx.get_mpz_t(), fl.get_mpz_t());
  while (Rat((approx + 1) * (approx + 1)) <= r) approx += 1;
  while (approx > 0 && Rat(approx * approx) > r) approx -= 1;
  return approx;
}

// Smallest integer t with t >= sqrt(r).
inline Int ceil_sqrt(const Rat& r) {
  Int f = floor_sqrt(r);
  return (Rat(f * f) == r) ? f : f + 1;
}

// "(a, b, c)" rendering for diagnostics.
inline std::string vec_str(const RatVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += rat_str(v[i]);
  }
  return s + ")";
}

inline std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

inline Rat sup_norm(const RatVec& v) {
  Rat m = 0;
  for (const Rat& x : v) {
    Rat a = abs_rat(x);
    if (a > m) m = a;
  }
  return m;
}

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// gcd of all numerators over lcm-free content of an integer vector; 0 for the zero vector.
inline Int content(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd_int(g, x);
  return g;
}

// Common denominator of a rational vector.
inline Int common_denominator(const RatVec& v) {
  Int l = 1;
  for (const Rat& x : v) l = lcm_int(l, x.get_den());
  return l;
}

// Divide by content and flip sign so the first nonzero entry is positive.
// Returns the zero vector unchanged.
inline IntVec primitive_vector(const IntVec& v) {
  Int c = content(v);
  if (c == 0) return v;
  IntVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / c;
  for (const Int& x : out) {
    if (x != 0) {
      if (x < 0)
        for (Int& y : out) y = -y;
      break;
    }
  }
  return out;
}

// Scale a rational direction to a primitive integer vector (sign-normalized).
inline IntVec primitive_direction(const RatVec& v) {
  Int den = common_denominator(v);
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat t = v[i] * den;
    w[i] = t.get_num();  // denominator is 1 after scaling
  }
  return primitive_vector(w);
}

}  // namespace mwall

#endif  // MWALL_RATIONAL_HPP
