#pragma once
// Independent reference implementations used only by the test suite.
//
// Everything in this header is deliberately written from first principles
// (dense truncated polynomial rings, closed-form Euler characteristics,
// brute-force box sweeps) and shares no ring/enumeration code with the
// library, so that agreement between the two is meaningful evidence.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <mwall/lattice.hpp>
#include <mwall/rational.hpp>
#include <mwall/walls.hpp>

namespace oracle {

using mwall::Int;
using mwall::IntVec;
using mwall::Rat;
using mwall::RatVec;

// ---------------------------------------------------------------------------
// Dense truncated polynomial ring Q[x_1..x_m] / (x_i^{d_i + 1}) modelling the
// cohomology of a product of projective spaces with factor dimensions d_i.
// Monomials are exponent vectors; integration reads off the coefficient of
// the unique top monomial x_1^{d_1} ... x_m^{d_m}.
// ---------------------------------------------------------------------------
struct TruncRing {
  std::vector<int> dims;

  using Poly = std::map<std::vector<int>, Rat>;

  Poly zero() const { return {}; }

  Poly constant(const Rat& c) const {
    Poly p;
    if (c != 0) p[std::vector<int>(dims.size(), 0)] = c;
    return p;
  }

  // The divisor sum(coords[i] * x_i).
  Poly divisor(const RatVec& coords) const {
    Poly p;
    for (size_t i = 0; i < dims.size(); ++i) {
      if (coords[i] == 0) continue;
      std::vector<int> e(dims.size(), 0);
      e[i] = 1;
      p[e] = coords[i];
    }
    return p;
  }

  static Poly add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [e, c] : b) {
      out[e] += c;
      if (out[e] == 0) out.erase(e);
    }
    return out;
  }

  Poly mul(const Poly& a, const Poly& b) const {
    Poly out;
    for (const auto& [ea, ca] : a) {
      for (const auto& [eb, cb] : b) {
        std::vector<int> e(dims.size());
        bool dead = false;
        for (size_t i = 0; i < dims.size(); ++i) {
          e[i] = ea[i] + eb[i];
          if (e[i] > dims[i]) {
            dead = true;
            break;
          }
        }
        if (dead) continue;
        out[e] += ca * cb;
        if (out[e] == 0) out.erase(e);
      }
    }
    return out;
  }

  Rat integrate(const Poly& p) const {
    std::vector<int> top(dims.begin(), dims.end());
    auto it = p.find(top);
    return it == p.end() ? Rat(0) : it->second;
  }

  // integral(D_1 ... D_n) for divisor coordinate vectors, n = sum(dims).
  Rat intersection(const std::vector<RatVec>& divisors) const {
    Poly acc = constant(Rat(1));
    for (const auto& d : divisors) acc = mul(acc, divisor(d));
    return integrate(acc);
  }
};

// ---------------------------------------------------------------------------
// Closed-form Euler characteristics.
// ---------------------------------------------------------------------------

// The degree-d binomial polynomial C(k + d, d) = prod_{j=1..d} (k + j) / d!,
// defined for every rational k.  Equals chi(O_{P^d}(k)) for integer k.
inline Rat binom_poly(const Rat& k, int d) {
  Rat num(1);
  Int fact(1);
  for (int j = 1; j <= d; ++j) {
    num *= k + Rat(j);
    fact *= j;
  }
  return num / Rat(fact);
}

// chi of the line class with divisor coordinates ks on a product of
// projective spaces with factor dimensions dims (Kuenneth factorisation).
inline Rat chi_product(const std::vector<int>& dims, const RatVec& ks) {
  Rat out(1);
  for (size_t i = 0; i < dims.size(); ++i) out *= binom_poly(ks[i], dims[i]);
  return out;
}

// chi(O(a.xi + b.h)) on the projectivisation of O + O(1) over the plane,
// for integer a >= 0, via pushforward to the plane:
//   pi_* O(a.xi) = O + O(1) + ... + O(a),
// so chi = sum_{j=0..a} chi(O_{P^2}(b + j)).
inline Rat chi_proj_bundle_p2(long a, const Rat& b) {
  Rat out(0);
  for (long j = 0; j <= a; ++j) out += binom_poly(b + Rat(j), 2);
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force wall oracles.
// ---------------------------------------------------------------------------

// Content-and-sign normalisation of an integer vector: divide by the gcd of
// the entries and flip so the first nonzero entry is positive.  Written out
// here so the tests do not depend on the library's convention helper.
inline IntVec normal_form(const IntVec& v) {
  Int g(0);
  for (const Int& x : v) {
    Int ax = x < 0 ? Int(-x) : x;
    if (g == 0)
      g = ax;
    else if (ax != 0)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ax.get_mpz_t());
  }
  if (g == 0) return v;
  IntVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  for (const Int& x : out) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : out) y = -y;
    break;
  }
  return out;
}

// Enumerate every exponent vector of the integer box |z_i| <= width.
template <typename Fn>
inline void for_each_box_vector(int rank, long width, Fn&& fn) {
  IntVec z(rank, Int(-width));
  while (true) {
    fn(z);
    int i = 0;
    while (i < rank) {
      z[i] += 1;
      if (z[i] <= width) break;
      z[i] = -width;
      ++i;
    }
    if (i == rank) break;
  }
}

// Fully independent wall set for a rank-2 lattice with hyperbolic pairing
// x.y = x1 y2 + x2 y1 (the quadric surface).  No preimages are involved: in
// dimension two the discriminant bound has no polarisation factors, so the
// filter is
//    zeta == -r1 c1 (mod r),  0 < -zeta^2 <= r^2 . 2 r1 (r - r1) Delta,
//    and the hyperplane zeta.gamma = 0 meets the vertex hull.
inline std::set<IntVec> classical_surface_walls(long r, const IntVec& c1,
                                                const Rat& c2,
                                                const std::vector<RatVec>& vertices,
                                                long width = 12) {
  Rat c1sq = Rat(2) * Rat(c1[0]) * Rat(c1[1]);
  Rat delta = (c2 - (Rat(r - 1) / Rat(2 * r)) * c1sq) / Rat(r);
  std::set<IntVec> out;
  for (long r1 = 1; r1 < r; ++r1) {
    Rat bound = Rat(r * r) * Rat(2 * r1 * (r - r1)) * delta;
    for_each_box_vector(2, width, [&](const IntVec& z) {
      if (z[0] == 0 && z[1] == 0) return;
      for (int i = 0; i < 2; ++i) {
        Int residue = z[i] + Int(r1) * c1[i];
        if (residue % r != 0) return;
      }
      Rat neg_sq = Rat(-2) * Rat(z[0]) * Rat(z[1]);
      if (!(neg_sq > 0 && neg_sq <= bound)) return;
      bool below = false, above = false;
      for (const RatVec& v : vertices) {
        Rat val = Rat(z[0]) * v[0] + Rat(z[1]) * v[1];
        if (val <= 0) below = true;
        if (val >= 0) above = true;
      }
      if (below && above) out.insert(normal_form(z));
    });
  }
  return out;
}

// Brute-force box sweep applying the library's published filter conditions
// to every coset vector of the |zeta|_inf <= width box: the candidate
// generation (the part the safety-radius engineering is responsible for) is
// replaced by exhaustion, while the per-candidate filter is evaluated with
// the same public primitives the enumerator uses.
inline std::set<IntVec> box_walls(const mwall::lattice::PolarisedLattice& L,
                                  const mwall::walls::SheafNumerics& s,
                                  const mwall::walls::Region& K,
                                  const mwall::walls::WallOptions& opts =
                                      mwall::walls::WallOptions(),
                                  long width = 12) {
  using namespace mwall;
  walls::RegionCertificate cert = walls::certify_region(L, K, opts.newton_bits);
  lattice::NewtonSettings witness_settings;
  witness_settings.denominator_bits = opts.newton_bits;
  Rat rsq(s.rank * s.rank);

  auto bound_holds = [&](const IntVec& zeta, long r1,
                         const lattice::DivisorClass& phi) {
    RatVec zr(zeta.size());
    for (size_t i = 0; i < zeta.size(); ++i) zr[i] = Rat(zeta[i]);
    Rat neg_sq = -walls::square_pairing(L, zr, zr, phi);
    Rat bound = rsq * walls::wall_bound(L, s, phi, r1);
    return neg_sq > 0 && neg_sq <= bound;
  };

  std::set<IntVec> out;
  for (long r1 = 1; r1 < s.rank; ++r1) {
    for_each_box_vector(L.rank, width, [&](const IntVec& zeta) {
      bool zero = true;
      for (const Int& x : zeta)
        if (x != 0) zero = false;
      if (zero) return;
      for (int i = 0; i < L.rank; ++i) {
        Int residue = zeta[i] + Int(r1) * s.c1[i];
        if (residue % s.rank != 0) return;
      }
      IntVec normal = normal_form(zeta);
      if (out.count(normal)) return;
      RatVec zr(zeta.size());
      for (size_t i = 0; i < zeta.size(); ++i) zr[i] = Rat(zeta[i]);
      if (!walls::wall_meets_region(zr, K)) return;
      auto gamma0 = walls::canonical_wall_point(zr, K);
      if (!gamma0) return;
      bool pass = false;
      try {
        auto res = lattice::newton_invert_power(
            L, lattice::CurveClass(*gamma0),
            std::optional<lattice::DivisorClass>(cert.interior_preimage),
            witness_settings);
        pass = bound_holds(zeta, r1, res.alpha);
      } catch (const Error&) {
      }
      for (size_t vi = 0; vi < cert.vertex_preimages.size() && !pass; ++vi)
        pass = bound_holds(zeta, r1, cert.vertex_preimages[vi]);
      if (pass) out.insert(normal);
    });
  }
  return out;
}

// Normal set of an enumeration result, for comparison against the oracles.
inline std::set<IntVec> normal_set(const mwall::walls::WallEnumeration& e) {
  std::set<IntVec> out;
  for (const auto& w : e.walls) out.insert(w.normal);
  return out;
}

}  // namespace oracle
