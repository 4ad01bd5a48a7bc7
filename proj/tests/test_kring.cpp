#include "test_util.hpp"
#include "oracles.hpp"

#include <mwall/catalog.hpp>
#include <mwall/io.hpp>
#include <mwall/kring.hpp>
#include <mwall/rng.hpp>

using namespace mwall;
using kring::CohomologyModel;
using kring::HList;
using kring::KClass;

namespace {

const CohomologyModel& model(const char* name) {
  return catalog::get(name).model;
}

// Random class with small integer character coordinates and integer rank.
KClass random_class(const CohomologyModel& m, Rng& rng, long mag = 3) {
  RatVec ch(m.basis_size());
  for (auto& v : ch) v = Rat(rng.integer(-mag, mag));
  return KClass(ch);
}

// H-list of n-1 random positive integer combinations of the ample generators.
HList random_hlist(const catalog::CatalogEntry& e, Rng& rng) {
  HList H;
  const auto& gens = e.lattice.ample_gens;
  for (int k = 0; k < e.lattice.dimension - 1; ++k) {
    RatVec d(e.lattice.rank, Rat(0));
    for (const auto& g : gens)
      d = vec_add(d, vec_scale(Rat(rng.integer(1, 3)), g));
    H.divisors.push_back(d);
  }
  return H;
}

}  // namespace

TEST_CASE("model sanity: unit, point, and Todd normalisation") {
  for (const auto& [name, entry] : catalog::all()) {
    const CohomologyModel& m = entry.model;
    INFO(name);
    CHECK(m.integrate(m.todd()) == 1);          // chi of the trivial class
    CHECK(m.integrate(m.point_class()) == 1);   // normalised volume class
    Rng rng(1);
    RatVec a(m.basis_size());
    for (auto& v : a) v = rng.rational(5, 4);
    CHECK(m.mul(m.unit(), a) == a);
    CHECK(m.mul(a, m.unit()) == a);
    // Multiplication is commutative and degree-additive on basis classes.
    for (size_t i = 0; i < m.basis_size(); ++i) {
      RatVec ei = m.zero();
      ei[i] = 1;
      for (size_t j = 0; j < m.basis_size(); ++j) {
        RatVec ej = m.zero();
        ej[j] = 1;
        RatVec p = m.mul(ei, ej);
        CHECK(p == m.mul(ej, ei));
        int deg = entry.model.basis()[i].degree + entry.model.basis()[j].degree;
        for (size_t k = 0; k < m.basis_size(); ++k)
          if (p[k] != 0) CHECK(entry.model.basis()[k].degree == deg);
      }
    }
  }
}

TEST_CASE("line class characters expand the divisor exponential") {
  const CohomologyModel& m = model("p3");
  // On the projective 3-space: exp(kH) = (1, k, k^2/2, k^3/6).
  for (long k : {-3L, -1L, 0L, 2L, 5L}) {
    KClass c = kring::line_class(m, rv({k}));
    REQUIRE(c.ch.size() == 4);
    CHECK(c.ch[0] == 1);
    CHECK(c.ch[1] == Rat(k));
    CHECK(c.ch[2] == Rat(k * k) / 2);
    CHECK(c.ch[3] == Rat(k * k * k) / 6);
  }
  // Structure class of a divisor: rank 0, leading term D.
  KClass d = kring::divisor_structure_class(m, rv({2}));
  CHECK(kring::kclass_rank(m, d) == 0);
  CHECK(d.ch[1] == 2);
}

TEST_CASE("Euler characteristics of line classes match the binomial oracle") {
  // Single projective spaces, all shifts in [-6, 6].
  for (const char* name : {"p2", "p3"}) {
    const CohomologyModel& m = model(name);
    int n = m.dimension();
    for (long k = -6; k <= 6; ++k) {
      Rat chi = kring::euler_characteristic(m, kring::line_class(m, rv({k})));
      CHECK(chi == oracle::binom_poly(Rat(k), n));
    }
  }

  // Products of projective spaces against the factorised closed form,
  // including non-integral twists (the character polynomial is exact).
  struct Case {
    const char* name;
    std::vector<int> dims;
  };
  Rng rng(55);
  for (const Case& cs : {Case{"p1xp1", {1, 1}}, Case{"p1xp2", {1, 2}},
                         Case{"p1cubed", {1, 1, 1}}}) {
    const CohomologyModel& m = model(cs.name);
    for (int trial = 0; trial < 30; ++trial) {
      RatVec ks(cs.dims.size());
      for (auto& k : ks) k = rng.rational(5, 3);
      Rat chi = kring::euler_characteristic(m, kring::line_class(m, ks));
      CHECK(chi == oracle::chi_product(cs.dims, ks));
    }
  }

  // Plane bundle: pushforward formula for nonnegative fibre twists.
  const CohomologyModel& mb = model("proj-bundle-p2");
  CHECK(kring::euler_characteristic(mb, KClass(mb.unit())) == 1);
  CHECK(kring::euler_characteristic(mb, kring::line_class(mb, rv({0, 1}))) == 4);
  CHECK(kring::euler_characteristic(mb, kring::line_class(mb, rv({1, 0}))) == 3);
  for (int trial = 0; trial < 30; ++trial) {
    long a = rng.integer(0, 4);
    long b = rng.integer(-4, 4);
    Rat chi = kring::euler_characteristic(
        mb, kring::line_class(mb, {Rat(b), Rat(a)}));
    CHECK(chi == oracle::chi_proj_bundle_p2(a, Rat(b)));
  }
}

TEST_CASE("Euler pairing is symmetric and additive") {
  Rng rng(57);
  for (const auto& [name, entry] : catalog::all()) {
    const CohomologyModel& m = entry.model;
    for (int trial = 0; trial < 10; ++trial) {
      KClass a = random_class(m, rng);
      KClass b = random_class(m, rng);
      KClass c = random_class(m, rng);
      CHECK(kring::euler_pairing(m, a, b) == kring::euler_pairing(m, b, a));
      CHECK(kring::euler_pairing(m, kring::k_add(a, c), b) ==
            kring::euler_pairing(m, a, b) + kring::euler_pairing(m, c, b));
      CHECK(kring::euler_characteristic(m, a) ==
            kring::euler_pairing(m, a, KClass(m.unit())));
    }
  }
}

TEST_CASE("determinant-line class of the trivial sheaf on the plane") {
  const CohomologyModel& m = model("p2");
  HList H;
  H.divisors.push_back(rv({2}));
  KClass u = kring::u_class(m, KClass(m.unit()), H);
  // Known value: -2H + 3H^2 in character coordinates (1, H, H^2).
  CHECK(u.ch == rv({0, -2, 3}));
}

TEST_CASE("point lifts satisfy their defining pairing property") {
  Rng rng(59);
  for (const auto& [name, entry] : catalog::all()) {
    const CohomologyModel& m = entry.model;
    HList H = random_hlist(entry, rng);
    std::vector<KClass> hs;
    for (const auto& d : H.divisors)
      hs.push_back(kring::divisor_structure_class(m, d));
    for (int depth = 0; depth <= static_cast<int>(H.divisors.size()); ++depth) {
      KClass pi = kring::point_lift(m, H, depth);
      RatVec acc = pi.ch;
      for (int t = 0; t < depth; ++t) acc = m.mul(acc, hs[t].ch);
      // ch(pi . h_1 .. h_depth) integrates like the point against every
      // degree-complementary divisor power: test the full product here.
      RatVec full = acc;
      for (int t = depth; t < static_cast<int>(hs.size()); ++t)
        full = m.mul(full, hs[t].ch);
      INFO(name << " depth " << depth);
      // Pairing against the remaining stack yields the full-intersection
      // volume normalised to the residual product: at full depth the
      // product is the point class itself.
      if (depth == static_cast<int>(H.divisors.size()))
        CHECK(acc == m.point_class());
    }
  }
}

TEST_CASE("identity families vanish identically on every catalog model") {
  Rng rng(61);
  for (const auto& [name, entry] : catalog::all()) {
    const CohomologyModel& m = entry.model;
    for (int trial = 0; trial < 8; ++trial) {
      KClass c = random_class(m, rng, 4);
      HList H = random_hlist(entry, rng);
      INFO(name << " trial " << trial);

      auto sec = kring::verify_secondway(m, c, H);
      CHECK(sec.ok);
      for (const Rat& v : sec.defect) CHECK(v == 0);

      auto fir = kring::verify_firstway_virtual(m, c, H);
      CHECK(fir.ok);
      for (const Rat& v : fir.defect_values) CHECK(v == 0);

      std::vector<long> scales(H.divisors.size());
      for (size_t i = 0; i < scales.size(); ++i)
        scales[i] = 1 + static_cast<long>(rng.integer(0, 2));
      auto sc = kring::verify_scaling(m, c, H, scales);
      CHECK(sc.ok);

      auto tel = kring::verify_telescoping(m, c, H);
      CHECK(tel.ok);
      CHECK(tel.steps.size() == H.divisors.size());
      Rat prod(1);
      for (const auto& st : tel.steps) prod *= st.degree;
      CHECK(prod == tel.overall_factor);
    }
  }
}

TEST_CASE("telescoping on the 3-space tower of unit degrees") {
  const catalog::CatalogEntry& e = catalog::get("p3");
  HList H;
  H.divisors = {rv({1}), rv({1})};
  auto tel = kring::verify_telescoping(e.model, KClass(e.model.unit()), H);
  CHECK(tel.ok);
  REQUIRE(tel.steps.size() == 2);
  CHECK(tel.overall_factor == 1);
  for (const auto& st : tel.steps) CHECK(st.degree == 1);
}

TEST_CASE("scaling rejects invalid scale lists") {
  const catalog::CatalogEntry& e = catalog::get("p1xp1");
  HList H;
  H.divisors = {rv({1, 1})};
  KClass c(e.model.unit());
  CHECK_THROWS_MATCHES(kring::verify_scaling(e.model, c, H, {2, 3}), Error,
                       ErrorCodeIs(ErrorCode::DimensionMismatch));
  CHECK_THROWS_MATCHES(kring::verify_scaling(e.model, c, H, {0}), Error,
                       ErrorCodeIs(ErrorCode::PreconditionViolated));
}

TEST_CASE("H-lists of the wrong length are rejected") {
  const catalog::CatalogEntry& e = catalog::get("p1cubed");
  HList H;
  H.divisors = {rv({1, 1, 1})};  // needs n-1 = 2 entries
  CHECK_THROWS_MATCHES(
      kring::verify_secondway(e.model, KClass(e.model.unit()), H), Error,
      ErrorCodeIs(ErrorCode::DimensionMismatch));
}

TEST_CASE("a corrupted top Todd coefficient is refused at construction") {
  // Round trip the plane model through its serialised form with the top
  // Todd coefficient disturbed: chi(trivial class) is no longer one, and
  // construction must fail the normalisation gate.
  const catalog::CatalogEntry& e = catalog::get("p2");
  io::json j = io::model_to_json(e.model);
  j["todd"][2] = "2";  // true value is 1 (chi(O) over the plane)
  CHECK_THROWS_MATCHES(io::model_from_json(j, "model"), Error,
                       ErrorCodeIs(ErrorCode::InternalInconsistency));
  // Control: the untouched serialisation reconstructs fine.
  CHECK_NOTHROW(io::model_from_json(io::model_to_json(e.model), "model"));
}
