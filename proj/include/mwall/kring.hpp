#pragma once

// Numerical K-theory layer.
//
// A CohomologyModel is an exact description of the even-degree rational
// cohomology ring of a smooth projective variety of dimension n together
// with its Todd class: a finite graded basis, a multiplication table, the
// integration functional on top degree, and the distinguished classes needed
// by the constructions below (the point class and the embedding of divisor
// classes into degree 1).
//
// K-theory classes are represented by their Chern character, a rational
// vector over the cohomology basis.  The Euler pairing is
//   chi(a . b) = integral( ch(a) ch(b) Todd ),
// which is exact in this representation.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace mwall::kring {

using lattice::DivisorClass;

struct BasisElement {
  std::string name;
  int degree = 0;  // complex codimension of the cycle class
};

// ---------------------------------------------------------------------------
// CohomologyModel
// ---------------------------------------------------------------------------

class CohomologyModel {
 public:
  CohomologyModel() = default;

  CohomologyModel(std::string name, int dimension,
                  std::vector<BasisElement> basis,
                  std::map<std::pair<int, int>, RatVec> mult,
                  RatVec integrate, RatVec todd, RatVec point_class,
                  std::vector<RatVec> divisor_embedding)
      : name_(std::move(name)),
        dimension_(dimension),
        basis_(std::move(basis)),
        mult_(std::move(mult)),
        integrate_(std::move(integrate)),
        todd_(std::move(todd)),
        point_class_(std::move(point_class)),
        divisor_embedding_(std::move(divisor_embedding)) {
    validate();
  }

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  size_t basis_size() const { return basis_.size(); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  const RatVec& todd() const { return todd_; }
  const RatVec& point_class() const { return point_class_; }
  size_t divisor_rank() const { return divisor_embedding_.size(); }

  RatVec zero() const { return RatVec(basis_.size(), Rat(0)); }

  RatVec unit() const {
    RatVec u = zero();
    u[unit_index_] = 1;
    return u;
  }

  // Product of two cohomology classes (Chern-character vectors).
  RatVec mul(const RatVec& a, const RatVec& b) const {
    check_len(a);
    check_len(b);
    RatVec out = zero();
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < b.size(); ++j) {
        if (b[j] == 0) continue;
        auto it = mult_.find(key(i, j));
        if (it == mult_.end()) continue;
        const RatVec& prod = it->second;
        Rat c = a[i] * b[j];
        for (size_t k = 0; k < out.size(); ++k)
          if (prod[k] != 0) out[k] += c * prod[k];
      }
    }
    return out;
  }

  Rat integrate(const RatVec& a) const {
    check_len(a);
    return dot(integrate_, a);
  }

  // A divisor class (lattice coordinates) as a degree-1 cohomology class.
  RatVec divisor_class(const RatVec& coords) const {
    if (coords.size() != divisor_embedding_.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "divisor coordinate length does not match model divisor rank");
    RatVec out = zero();
    for (size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0) out = vec_add_local(out, vec_scale(coords[i], divisor_embedding_[i]));
    return out;
  }

  // Truncate to the components of a single degree.
  RatVec degree_part(const RatVec& a, int deg) const {
    check_len(a);
    RatVec out = zero();
    for (size_t i = 0; i < a.size(); ++i)
      if (basis_[i].degree == deg) out[i] = a[i];
    return out;
  }

  // exp(D) = sum D^k / k! truncated above dimension n.
  RatVec exp_divisor(const RatVec& d1) const {
    RatVec out = unit();
    RatVec pow = unit();
    Rat fact(1);
    for (int k = 1; k <= dimension_; ++k) {
      pow = mul(pow, d1);
      fact *= k;
      out = vec_add_local(out, vec_scale(Rat(1) / fact, pow));
    }
    return out;
  }

 private:
  static std::pair<int, int> key(size_t i, size_t j) {
    int a = static_cast<int>(i), b = static_cast<int>(j);
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  void check_len(const RatVec& a) const {
    if (a.size() != basis_.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "class vector length does not match model basis size");
  }

  static RatVec vec_add_local(const RatVec& a, const RatVec& b) {
    RatVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
  }

  // Structural validation at construction time.  This is a correctness gate:
  // the multiplication table must be commutative and degree-additive, the
  // unit must be the unique degree-0 element and act as identity, integration
  // must be supported in top degree only, and chi(O) computed from the Todd
  // class must equal 1 (the models here are all rational/with chi(O) = 1;
  // a corrupted table is reported as an internal inconsistency).
  void validate() {
    if (dimension_ < 1)
      throw Error(ErrorCode::InternalInconsistency, "model dimension must be >= 1");
    if (basis_.empty())
      throw Error(ErrorCode::InternalInconsistency, "model basis is empty");
    int units = 0;
    int top_elems = 0;
    for (size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i].degree == 0) {
        ++units;
        unit_index_ = i;
      }
      if (basis_[i].degree == dimension_) ++top_elems;
      if (basis_[i].degree < 0 || basis_[i].degree > dimension_)
        throw Error(ErrorCode::InternalInconsistency,
                    "basis degree out of range in model " + name_);
    }
    if (units != 1)
      throw Error(ErrorCode::InternalInconsistency,
                  "model must have exactly one degree-0 basis element");
    if (top_elems != 1)
      throw Error(ErrorCode::InternalInconsistency,
                  "model must have exactly one top-degree basis element");
    for (const auto& [ij, prod] : mult_) {
      if (prod.size() != basis_.size())
        throw Error(ErrorCode::InternalInconsistency,
                    "multiplication table row of wrong length");
      int dsum = basis_[ij.first].degree + basis_[ij.second].degree;
      for (size_t k = 0; k < prod.size(); ++k)
        if (prod[k] != 0 && basis_[k].degree != dsum)
          throw Error(ErrorCode::InternalInconsistency,
                      "multiplication table violates degree additivity in model " +
                          name_);
    }
    if (integrate_.size() != basis_.size() || todd_.size() != basis_.size() ||
        point_class_.size() != basis_.size())
      throw Error(ErrorCode::InternalInconsistency,
                  "model vector of wrong length");
    for (size_t i = 0; i < basis_.size(); ++i)
      if (integrate_[i] != 0 && basis_[i].degree != dimension_)
        throw Error(ErrorCode::InternalInconsistency,
                    "integration functional supported outside top degree");
    for (const auto& d : divisor_embedding_) {
      if (d.size() != basis_.size())
        throw Error(ErrorCode::InternalInconsistency,
                    "divisor embedding vector of wrong length");
      for (size_t k = 0; k < d.size(); ++k)
        if (d[k] != 0 && basis_[k].degree != 1)
          throw Error(ErrorCode::InternalInconsistency,
                      "divisor embedding is not homogeneous of degree 1");
    }
    // Unit acts as identity on every basis element.
    for (size_t j = 0; j < basis_.size(); ++j) {
      RatVec ej = zero();
      ej[j] = 1;
      RatVec p = mul(unit(), ej);
      if (p != ej)
        throw Error(ErrorCode::InternalInconsistency,
                    "unit does not act as identity in model " + name_);
    }
    // Commutativity is free (table is stored on sorted pairs), but verify
    // the point class integrates to 1 and chi(O) = integral(Todd) = 1.
    if (integrate(point_class_) != 1)
      throw Error(ErrorCode::InternalInconsistency,
                  "point class does not integrate to 1 in model " + name_);
    if (integrate(todd_) != 1)
      throw Error(ErrorCode::InternalInconsistency,
                  "Euler characteristic of the structure sheaf is not 1 in model " +
                      name_ + " (corrupted Todd class or multiplication table)");
  }

  std::string name_;
  int dimension_ = 0;
  std::vector<BasisElement> basis_;
  std::map<std::pair<int, int>, RatVec> mult_;
  RatVec integrate_;
  RatVec todd_;
  RatVec point_class_;
  std::vector<RatVec> divisor_embedding_;
  size_t unit_index_ = 0;
};

// ---------------------------------------------------------------------------
// K-theory classes (Chern-character vectors) and the Euler pairing.
// ---------------------------------------------------------------------------

struct KClass {
  RatVec ch;  // Chern character over the model basis
  KClass() = default;
  explicit KClass(RatVec v) : ch(std::move(v)) {}
};

inline KClass k_add(const KClass& a, const KClass& b) {
  return KClass(vec_add(a.ch, b.ch));
}

inline KClass k_sub(const KClass& a, const KClass& b) {
  return KClass(vec_sub(a.ch, b.ch));
}

inline KClass k_scale(const Rat& c, const KClass& a) {
  return KClass(vec_scale(c, a.ch));
}

inline KClass k_mul(const CohomologyModel& m, const KClass& a, const KClass& b) {
  return KClass(m.mul(a.ch, b.ch));
}

// chi(a . b) = integral(ch(a) ch(b) Todd).
inline Rat euler_pairing(const CohomologyModel& m, const KClass& a, const KClass& b) {
  return m.integrate(m.mul(m.mul(a.ch, b.ch), m.todd()));
}

inline Rat euler_characteristic(const CohomologyModel& m, const KClass& a) {
  return m.integrate(m.mul(a.ch, m.todd()));
}

// ch(O(D)) = exp(D).
inline KClass line_class(const CohomologyModel& m, const RatVec& divisor_coords) {
  return KClass(m.exp_divisor(m.divisor_class(divisor_coords)));
}

// Class of the structure sheaf of an effective divisor stack:
// ch(O_D) = 1 - exp(-D)  (from 0 -> O(-D) -> O -> O_D -> 0).
inline KClass divisor_structure_class(const CohomologyModel& m,
                                      const RatVec& divisor_coords) {
  RatVec minus(divisor_coords.size());
  for (size_t i = 0; i < divisor_coords.size(); ++i) minus[i] = -divisor_coords[i];
  RatVec e = m.exp_divisor(m.divisor_class(minus));
  return KClass(vec_sub(m.unit(), e));
}

// The class of a point (skyscraper: ch = point class exactly).
inline KClass point_kclass(const CohomologyModel& m) { return KClass(m.point_class()); }

inline bool is_numerically_trivial(const CohomologyModel& m, const KClass& a) {
  for (const Rat& v : a.ch)
    if (v != 0) return false;
  return true;
}

// Numerical triviality via the pairing: a is zero iff chi(a . b) = 0 for all
// basis classes b.  (Equivalent to the coordinate test when the pairing is
// nondegenerate; exposed for verification purposes.)
inline bool is_pairing_trivial(const CohomologyModel& m, const KClass& a) {
  for (size_t j = 0; j < m.basis_size(); ++j) {
    RatVec ej = m.zero();
    ej[j] = 1;
    if (euler_pairing(m, a, KClass(ej)) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rank and first Chern class of a K-class (degree-0 and degree-1 parts).
// ---------------------------------------------------------------------------

inline Rat kclass_rank(const CohomologyModel& m, const KClass& a) {
  RatVec d0 = m.degree_part(a.ch, 0);
  Rat r(0);
  for (const Rat& v : d0) r += v;  // exactly one degree-0 slot
  return r;
}

// ---------------------------------------------------------------------------
// Auxiliary determinant-type classes.
//
// Fix a list H_1, .., H_{n-1} of ample divisor classes and write
// h_i = ch(O_{H_i}) = 1 - exp(-H_i).  For a K-class c of rank r put
//
//   u(c; H_1..H_{n-1}) = -r . h_{n-1} ... h_1
//                        + chi(c . h_1 ... h_{n-1}) . [point]
//
//   w(c; H_1..H_{n-1}) = -chi(c . h_{n-1} ... h_1 . h_1) . h_{n-1} ... h_2
//                        + chi(c . h_{n-1} ... h_2 . h_1) . h_{n-1} ... h_1
//
// (For n = 1 the product over an empty list is the unit and u = -r + chi(c).)
// ---------------------------------------------------------------------------

struct HList {
  std::vector<RatVec> divisors;  // n-1 divisor classes in lattice coordinates
};

namespace detail {

// h_{from} ... h_{to} as a cohomology class (inclusive indices into hs; an
// empty range gives the unit).
inline RatVec h_product(const CohomologyModel& m, const std::vector<KClass>& hs,
                        int from, int to) {
  RatVec acc = m.unit();
  for (int i = from; i <= to; ++i) acc = m.mul(acc, hs[i].ch);
  return acc;
}

inline std::vector<KClass> divisor_stack_classes(const CohomologyModel& m,
                                                 const HList& H) {
  std::vector<KClass> hs;
  hs.reserve(H.divisors.size());
  for (const auto& d : H.divisors) hs.push_back(divisor_structure_class(m, d));
  return hs;
}

}  // namespace detail

inline void check_hlist(const CohomologyModel& m, const HList& H) {
  if (static_cast<int>(H.divisors.size()) != m.dimension() - 1)
    throw Error(ErrorCode::DimensionMismatch,
                "expected dimension-1 = " + std::to_string(m.dimension() - 1) +
                    " divisor classes, got " + std::to_string(H.divisors.size()));
}

inline KClass u_class(const CohomologyModel& m, const KClass& c, const HList& H) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  std::vector<KClass> hs = detail::divisor_stack_classes(m, H);
  RatVec full = detail::h_product(m, hs, 0, k - 1);
  Rat r = kclass_rank(m, c);
  Rat chi = euler_characteristic(m, KClass(m.mul(c.ch, full)));
  RatVec out = vec_scale(-r, full);
  out = vec_add(out, vec_scale(chi, m.point_class()));
  return KClass(out);
}

inline KClass w_class(const CohomologyModel& m, const KClass& c, const HList& H) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  if (k < 1)
    throw Error(ErrorCode::PreconditionViolated,
                "w_class needs at least one divisor class");
  std::vector<KClass> hs = detail::divisor_stack_classes(m, H);
  RatVec tail_full = detail::h_product(m, hs, 1, k - 1);       // h_{n-1} ... h_2
  RatVec all = m.mul(tail_full, hs[0].ch);                     // h_{n-1} ... h_1
  Rat chi1 = euler_characteristic(m, KClass(m.mul(c.ch, m.mul(all, hs[0].ch))));
  Rat chi2 = euler_characteristic(m, KClass(m.mul(c.ch, all)));
  RatVec out = vec_scale(-chi1, tail_full);
  out = vec_add(out, vec_scale(chi2, all));
  return KClass(out);
}

// ---------------------------------------------------------------------------
// Virtual restriction to complete intersections.
//
// The iterated restriction of a point to H_1 ∩ .. ∩ H_m vanishes in K-theory,
// so the correct "point on the intersection" is the pure-degree class
//
//   pi_m = H_1-cycle-power normalised so that ch(pi_m . h_1 ... h_m) = point.
//
// Concretely we use pi_m = (product over a transverse complement) / volume;
// here we realise it as the degree-m part construction below: the class
// xi_m with ch(xi_m) of pure degree m and integral(xi_m . H-cycle part) = 1.
// For the complete-intersection verification only the defining property
// matters, and it is checked exactly at construction.
// ---------------------------------------------------------------------------

// Build the point lift pi_m for the first m divisor stacks of H: a class of
// pure degree m with ch(pi_m . h_1 ... h_m) = point class.  Realised as
//   pi_m = (H_{m+1} .. H_{n-1} cycle product) / (integral H_1..H_{n-1} over
//          the complementary powers),
// i.e. the cycle class of the residual complete intersection, normalised.
inline KClass point_lift(const CohomologyModel& m, const HList& H, int depth) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  if (depth < 0 || depth > k)
    throw Error(ErrorCode::PreconditionViolated, "point lift depth out of range");
  if (depth == 0) return point_kclass(m);
  // Residual cycle: product of the *divisor* classes H_{depth+1} .. H_{n-1}
  // times enough copies of H_1 to reach top degree, normalised to integral 1
  // against the first depth divisor stacks.
  RatVec cyc = m.unit();
  for (int i = depth; i < k; ++i) cyc = m.mul(cyc, m.divisor_class(H.divisors[i]));
  // Raise to pure degree (n - depth) using powers of H_1's divisor class.
  int deg = m.dimension() - depth - (k - depth);
  RatVec h1 = m.divisor_class(H.divisors[0]);
  for (int i = 0; i < deg; ++i) cyc = m.mul(cyc, h1);
  // Normalise: the product with the divisor classes H_1 .. H_depth must
  // integrate to 1.
  RatVec test = cyc;
  for (int i = 0; i < depth; ++i) test = m.mul(test, m.divisor_class(H.divisors[i]));
  Rat vol = m.integrate(test);
  if (vol == 0)
    throw Error(ErrorCode::PreconditionViolated,
                "degenerate divisor list: residual cycle has zero volume");
  return KClass(vec_scale(Rat(1) / vol, cyc));
}

// ---------------------------------------------------------------------------
// Verification routines.  Each returns the defect class / defect values so
// tests can assert exact vanishing and report failures informatively.
// ---------------------------------------------------------------------------

struct VerifyResult {
  bool ok = false;
  RatVec defect;        // class-level defect (empty when the check is scalar)
  RatVec defect_values; // scalar defects (pairings), when applicable
};

// Second construction consistency: w(c) . h_1 = d_1 . u(c) where
// d_1 = integral(H_1 . H_1 . H_2 ... H_{n-1}).
inline VerifyResult verify_secondway(const CohomologyModel& m, const KClass& c,
                                     const HList& H) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  std::vector<KClass> hs = detail::divisor_stack_classes(m, H);
  KClass u = u_class(m, c, H);
  KClass w = w_class(m, c, H);
  RatVec lhs = m.mul(w.ch, hs[0].ch);
  // d_1 = integral over the complete intersection H_2..H_{n-1} of H_1^2.
  RatVec cyc = m.divisor_class(H.divisors[0]);
  cyc = m.mul(cyc, m.divisor_class(H.divisors[0]));
  for (int i = 1; i < k; ++i) cyc = m.mul(cyc, m.divisor_class(H.divisors[i]));
  Rat d1 = m.integrate(cyc);
  RatVec rhs = vec_scale(d1, u.ch);
  VerifyResult out;
  out.defect = vec_sub(lhs, rhs);
  out.ok = true;
  for (const Rat& v : out.defect)
    if (v != 0) out.ok = false;
  return out;
}

// First construction consistency (virtual restriction form): with
// u~ = -r h_{n-1} ... h_2 + chi(c . h_1 ... h_{n-1}) pi_1
// (the u-class of the restriction to the first divisor, with the point
// lifted to the pure-degree class pi_1 satisfying ch(pi_1 . h_1) = point),
// the defect w(c) - d_1 u~ pairs to zero against h_1 . b for every basis
// class b.
inline VerifyResult verify_firstway_virtual(const CohomologyModel& m, const KClass& c,
                                    const HList& H) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  std::vector<KClass> hs = detail::divisor_stack_classes(m, H);
  KClass w = w_class(m, c, H);
  Rat r = kclass_rank(m, c);
  RatVec full = detail::h_product(m, hs, 0, k - 1);
  Rat chi = euler_characteristic(m, KClass(m.mul(c.ch, full)));
  RatVec tail = detail::h_product(m, hs, 1, k - 1);  // h_{n-1} ... h_2
  KClass pi = point_lift(m, H, 1);
  RatVec ut = vec_scale(-r, tail);
  ut = vec_add(ut, vec_scale(chi, pi.ch));
  // d_1 as in verify_secondway.
  RatVec cyc = m.mul(m.divisor_class(H.divisors[0]), m.divisor_class(H.divisors[0]));
  for (int i = 1; i < k; ++i) cyc = m.mul(cyc, m.divisor_class(H.divisors[i]));
  Rat d1 = m.integrate(cyc);
  RatVec defect = vec_sub(w.ch, vec_scale(d1, ut));
  VerifyResult out;
  out.defect = defect;
  out.ok = true;
  for (size_t j = 0; j < m.basis_size(); ++j) {
    RatVec ej = m.zero();
    ej[j] = 1;
    RatVec prod = m.mul(defect, m.mul(hs[0].ch, ej));
    Rat val = m.integrate(m.mul(prod, m.todd()));
    out.defect_values.push_back(val);
    if (val != 0) out.ok = false;
  }
  return out;
}

// Scaling: u(c; a_1 H_1, .., a_{n-1} H_{n-1}) = (a_1 ... a_{n-1}) u(c; H).
inline VerifyResult verify_scaling(const CohomologyModel& m, const KClass& c,
                                   const HList& H, const std::vector<long>& scales) {
  check_hlist(m, H);
  if (scales.size() != H.divisors.size())
    throw Error(ErrorCode::DimensionMismatch,
                "need one scale factor per divisor class");
  HList scaled;
  Rat factor(1);
  for (size_t i = 0; i < H.divisors.size(); ++i) {
    if (scales[i] <= 0)
      throw Error(ErrorCode::PreconditionViolated, "scale factors must be positive");
    scaled.divisors.push_back(vec_scale(Rat(scales[i]), H.divisors[i]));
    factor *= scales[i];
  }
  KClass lhs = u_class(m, c, scaled);
  KClass rhs = k_scale(factor, u_class(m, c, H));
  VerifyResult out;
  out.defect = vec_sub(lhs.ch, rhs.ch);
  out.ok = true;
  for (const Rat& v : out.defect)
    if (v != 0) out.ok = false;
  return out;
}

// Telescoping: the secondway/firstway pair, iterated down the tower of
// complete intersections.  Step t (1-based, t = 1..n-1) works on the
// intersection of the first t-1 divisors, realised virtually on the ambient
// model by localising every pairing with the accumulated prefix factor
// h_1 ... h_{t-1}.  The step classes use the stack suffix h_t .. h_{n-1}:
//
//   w_t  = -chi(c . h_1..h_{n-1} . h_t) . (h_{n-1} .. h_{t+1})
//          + chi(c . h_1..h_{n-1}) . (h_{n-1} .. h_t)
//   U_t  = -r . (h_{n-1} .. h_t)     + chi(c . h_1..h_{n-1}) . pi_{t-1}
//   U~_t = -r . (h_{n-1} .. h_{t+1}) + chi(c . h_1..h_{n-1}) . pi_t
//
// and the step asserts, against every basis class b,
//   secondway:  chi( (w_t . h_t - d_t U_t) . prefix . b )      = 0
//   firstway :  chi( (w_t - d_t U~_t) . prefix . h_t . b )     = 0
// with d_t = integral(H_t . H_1 ... H_{n-1}).  The overall exponent is the
// product d_1 ... d_{n-1}.
struct TelescopingStep {
  Rat degree;            // d_t
  bool secondway_ok = false;
  bool firstway_ok = false;
  RatVec secondway_defect;  // localized defect class
  RatVec firstway_defect;
};

struct TelescopingResult {
  bool ok = false;
  std::vector<TelescopingStep> steps;
  Rat overall_factor = 1;  // product of the step degrees d_t
};

inline TelescopingResult verify_telescoping(const CohomologyModel& m, const KClass& c,
                                            const HList& H) {
  check_hlist(m, H);
  const int k = static_cast<int>(H.divisors.size());
  std::vector<KClass> hs = detail::divisor_stack_classes(m, H);
  Rat r = kclass_rank(m, c);
  RatVec all = detail::h_product(m, hs, 0, k - 1);
  Rat chi_top = euler_characteristic(m, KClass(m.mul(c.ch, all)));
  TelescopingResult out;
  out.ok = true;
  auto pairs_to_zero = [&](const RatVec& cls) {
    for (size_t j = 0; j < m.basis_size(); ++j) {
      RatVec ej = m.zero();
      ej[j] = 1;
      if (m.integrate(m.mul(m.mul(cls, ej), m.todd())) != 0) return false;
    }
    return true;
  };
  for (int t = 1; t <= k; ++t) {
    TelescopingStep step;
    // d_t = integral( H_t . H_1 ... H_{n-1} ).
    RatVec cyc = m.divisor_class(H.divisors[t - 1]);
    for (int i = 0; i < k; ++i) cyc = m.mul(cyc, m.divisor_class(H.divisors[i]));
    step.degree = m.integrate(cyc);
    out.overall_factor *= step.degree;

    RatVec suffix_from = detail::h_product(m, hs, t - 1, k - 1);  // h_t..h_{n-1}
    RatVec suffix_after = detail::h_product(m, hs, t, k - 1);     // h_{t+1}..
    RatVec prefix = detail::h_product(m, hs, 0, t - 2);           // h_1..h_{t-1}
    Rat chi1 = euler_characteristic(m, KClass(m.mul(c.ch, m.mul(all, hs[t - 1].ch))));
    RatVec w_t = vec_add(vec_scale(-chi1, suffix_after),
                         vec_scale(chi_top, suffix_from));
    KClass pi_prev = point_lift(m, H, t - 1);
    KClass pi_here = point_lift(m, H, t);
    RatVec u_t = vec_add(vec_scale(-r, suffix_from), vec_scale(chi_top, pi_prev.ch));
    RatVec ut_t = vec_add(vec_scale(-r, suffix_after), vec_scale(chi_top, pi_here.ch));

    RatVec sec = m.mul(vec_sub(m.mul(w_t, hs[t - 1].ch), vec_scale(step.degree, u_t)),
                       prefix);
    RatVec fir = m.mul(m.mul(vec_sub(w_t, vec_scale(step.degree, ut_t)), prefix),
                       hs[t - 1].ch);
    step.secondway_defect = sec;
    step.firstway_defect = fir;
    step.secondway_ok = pairs_to_zero(sec);
    step.firstway_ok = pairs_to_zero(fir);
    if (!step.secondway_ok || !step.firstway_ok) out.ok = false;
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace mwall::kring
