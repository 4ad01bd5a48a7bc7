#include "test_util.hpp"
#include "oracles.hpp"

#include <mwall/catalog.hpp>
#include <mwall/rng.hpp>
#include <mwall/walls.hpp>

using namespace mwall;
using lattice::CurveClass;
using lattice::DivisorClass;
using lattice::PolarisedLattice;
using lattice::SymTensor;
using walls::Region;
using walls::SheafNumerics;
using walls::WallOptions;

namespace {

const PolarisedLattice& quadric() { return catalog::get("p1xp1").lattice; }
const PolarisedLattice& cube() { return catalog::get("p1cubed").lattice; }
const PolarisedLattice& bundle() { return catalog::get("proj-bundle-p2").lattice; }

// Sheaf data on a surface: c2 is the bare scalar functional.
SheafNumerics surface_sheaf(long rank, std::initializer_list<long> c1, long c2) {
  SheafNumerics s;
  s.rank = rank;
  s.c1 = iv(c1);
  s.c2 = SymTensor(2, 0);
  s.c2.set({}, Rat(c2));
  return s;
}

// Sheaf data on a threefold: c2 is a linear functional on divisors.
SheafNumerics threefold_sheaf(const PolarisedLattice& L, long rank,
                              std::initializer_list<long> c1,
                              std::initializer_list<long> c2_values) {
  SheafNumerics s;
  s.rank = rank;
  s.c1 = iv(c1);
  s.c2 = SymTensor(L.rank, 1);
  int i = 0;
  for (long v : c2_values) s.c2.set({i++}, Rat(v));
  return s;
}

}  // namespace

TEST_CASE("slope is the normalised pairing of c1 with the curve class") {
  SheafNumerics s = threefold_sheaf(cube(), 2, {1, -1, 0}, {0, 0, 0});
  CHECK(walls::slope(s, CurveClass(rv({1, 1, 1}))) == 0);
  CHECK(walls::slope(s, CurveClass(rv({3, 1, 1}))) == 1);
  s = threefold_sheaf(cube(), 1, {1, 0, 0}, {0, 0, 0});
  CHECK(walls::slope(s, CurveClass(rv({3, 0, 0}))) == 3);
  s.c1 = iv({0, 0, 0});
  CHECK(walls::slope(s, CurveClass(rv({5, 7, 9}))) == 0);
}

TEST_CASE("discriminant pairing implements the rank-normalised formula") {
  // Surface with c1 = 0: plain c2 / r.
  SheafNumerics s = surface_sheaf(2, {0, 0}, 4);
  CHECK(walls::discriminant_pairing(quadric(), s, DivisorClass(rv({1, 1}))) == 2);
  // Rank one: no c1-square correction at all.
  s = surface_sheaf(1, {3, -2}, 5);
  CHECK(walls::discriminant_pairing(quadric(), s, DivisorClass(rv({1, 1}))) == 5);
  // Plane bundle with c2 . h = c2 . xi = 2 at polarisation h + xi.
  SheafNumerics b = threefold_sheaf(bundle(), 2, {0, 0}, {2, 2});
  CHECK(walls::discriminant_pairing(bundle(), b, DivisorClass(rv({1, 1}))) == 2);
  // Nonzero c1 on the quadric: c2 - ((r-1)/2r) c1^2, all over r.
  s = surface_sheaf(2, {1, 1}, 3);
  // c1^2 = 2, correction (1/4)*2 = 1/2; (3 - 1/2)/2 = 5/4.
  CHECK(walls::discriminant_pairing(quadric(), s, DivisorClass(rv({2, 1}))) ==
        Rat(5, 4));
}

TEST_CASE("wall bound values and the negative-bound rejection") {
  SheafNumerics s = surface_sheaf(2, {0, 0}, 4);  // delta = 2
  CHECK(walls::wall_bound(quadric(), s, DivisorClass(rv({1, 1})), 1) == 4);

  SheafNumerics r3 = surface_sheaf(3, {0, 0}, 0);
  r3.c2.set({}, Rat(9, 2));  // delta = (1/3)(9/2) = 3/2
  CHECK(walls::wall_bound(quadric(), r3, DivisorClass(rv({1, 1})), 2) == 6);

  SheafNumerics zero = surface_sheaf(2, {0, 0}, 0);
  CHECK(walls::wall_bound(quadric(), zero, DivisorClass(rv({1, 1})), 1) == 0);

  // A negative discriminant yields a negative bound value; the enumeration
  // front end is what rejects such data, at the region certification stage.
  SheafNumerics neg = surface_sheaf(2, {0, 0}, -1);
  CHECK(walls::wall_bound(quadric(), neg, DivisorClass(rv({1, 1})), 1) == -1);
  CHECK_THROWS_MATCHES(
      walls::enumerate_walls(quadric(), neg, walls::default_region(quadric())),
      Error, ErrorCodeIs(ErrorCode::NegativeBound));

  CHECK_THROWS_MATCHES(
      walls::wall_bound(quadric(), s, DivisorClass(rv({1, 1})), 2), Error,
      ErrorCodeIs(ErrorCode::PreconditionViolated));
}

TEST_CASE("twisting by a line class translates c1 and corrects c2") {
  Rng rng(63);
  for (const char* name : {"p1xp1", "p1cubed", "proj-bundle-p2"}) {
    const PolarisedLattice& L = catalog::get(name).lattice;
    for (int trial = 0; trial < 10; ++trial) {
      SheafNumerics s;
      s.rank = 2 + rng.integer(0, 1);
      s.c1.resize(L.rank);
      for (auto& x : s.c1) x = rng.integer(-2, 2);
      s.c2 = SymTensor(L.rank, L.dimension - 2);
      SymTensor::for_each_sorted_index(L.rank, L.dimension - 2,
                                       [&](const std::vector<int>& idx) {
                                         s.c2.set(idx, Rat(rng.integer(0, 6)));
                                       });
      IntVec d(L.rank);
      for (auto& x : d) x = rng.integer(-2, 2);
      SheafNumerics t = walls::twist(L, s, d);
      CHECK(t.rank == s.rank);
      for (int i = 0; i < L.rank; ++i)
        CHECK(t.c1[i] == s.c1[i] + Int(s.rank) * d[i]);
      // The discriminant pairing is a twist invariant.
      RatVec phi(L.rank);
      for (auto& x : phi) x = rng.positive_rational(3, 2);
      CHECK(walls::discriminant_pairing(L, t, DivisorClass(phi)) ==
            walls::discriminant_pairing(L, s, DivisorClass(phi)));
    }
  }
}

TEST_CASE("wall-region intersection tests and canonical points") {
  Region K;
  K.vertices = {rv({1, 2}), rv({2, 1})};
  CHECK(walls::wall_meets_region(rv({1, -1}), K));
  auto pt = walls::canonical_wall_point(rv({1, -1}), K);
  REQUIRE(pt.has_value());
  CHECK(*pt == rvd({3, 3}, 2));

  // Strictly positive region misses the all-positive functional.
  CHECK_FALSE(walls::wall_meets_region(rv({1, 1}), K));
  CHECK_FALSE(walls::canonical_wall_point(rv({1, 1}), K).has_value());

  // A wall through a vertex meets the region at that vertex.
  Region Kv;
  Kv.vertices = {rv({1, 1}), rv({2, 1})};
  CHECK(walls::wall_meets_region(rv({1, -1}), Kv));
  auto vpt = walls::canonical_wall_point(rv({1, -1}), Kv);
  REQUIRE(vpt.has_value());
  CHECK(*vpt == rv({1, 1}));
}

TEST_CASE("the default region of the quadric is the known cone section") {
  Region K = walls::default_region(quadric());
  REQUIRE(K.vertices.size() == 2);
  CHECK(K.vertices[0] == RatVec{Rat(1, 4), Rat(7, 4)});
  CHECK(K.vertices[1] == RatVec{Rat(7, 4), Rat(1, 4)});

  // Every default-region vertex of every catalog entry certifies.
  for (const auto& [name, entry] : catalog::all()) {
    Region R = walls::default_region(entry.lattice);
    auto cert = walls::certify_region(entry.lattice, R);
    REQUIRE(cert.vertex_preimages.size() == R.vertices.size());
    lattice::NewtonSettings settings;
    for (size_t i = 0; i < R.vertices.size(); ++i) {
      CHECK(lattice::is_in_ample_cone(entry.lattice, cert.vertex_preimages[i],
                                      true));
      Rat err = sup_norm(vec_sub(
          lattice::power_map(entry.lattice, cert.vertex_preimages[i]).coords,
          R.vertices[i]));
      INFO(name << " vertex " << i);
      CHECK(err <= settings.tolerance);
    }
    CHECK(lattice::is_in_ample_cone(entry.lattice, cert.interior_preimage, true));
  }
}

TEST_CASE("region certification fails outside the power-map image") {
  Region K;
  K.vertices = {rv({-1, -1})};
  CHECK_THROWS_MATCHES(walls::certify_region(quadric(), K), Error,
                       ErrorCodeIs(ErrorCode::RegionNotInP));
  Region empty;
  CHECK_THROWS_MATCHES(walls::certify_region(quadric(), empty), Error,
                       ErrorCodeIs(ErrorCode::EmptyRegion));
}

TEST_CASE("quadric demo instance yields exactly the balanced wall") {
  SheafNumerics s = surface_sheaf(2, {0, 0}, 2);
  auto e = walls::enumerate_walls(quadric(), s, walls::default_region(quadric()));
  REQUIRE(e.walls.size() == 1);
  const walls::Wall& w = e.walls[0];
  CHECK(w.normal == iv({1, -1}));
  CHECK(w.zeta == iv({2, -2}));
  CHECK(w.r1 == 1);
  CHECK(w.neg_self_pairing == 8);
  CHECK(w.bound_value == 8);  // the inclusive boundary case
  CHECK(w.witness_point == rv({1, 1}));
}

TEST_CASE("surface wall sets match the fully independent classical oracle") {
  struct Case {
    long rank;
    std::initializer_list<long> c1;
    long c2;
  };
  const Region K = walls::default_region(quadric());
  for (const Case& cs : {Case{2, {0, 0}, 2}, Case{2, {0, 0}, 3},
                         Case{2, {0, 0}, 4}, Case{2, {0, 0}, 5},
                         Case{2, {0, 0}, 6}, Case{2, {1, 0}, 3},
                         Case{2, {1, 1}, 4}, Case{3, {0, 0}, 3}}) {
    SheafNumerics s = surface_sheaf(cs.rank, cs.c1, cs.c2);
    auto e = walls::enumerate_walls(quadric(), s, K);
    std::set<IntVec> expect = oracle::classical_surface_walls(
        cs.rank, s.c1, Rat(cs.c2), K.vertices);
    INFO("rank " << cs.rank << " c2 " << cs.c2);
    CHECK(oracle::normal_set(e) == expect);
  }

  // Frozen counts for the two documented nonzero instances.
  auto e1 = walls::enumerate_walls(quadric(), surface_sheaf(3, {0, 0}, 3), K);
  std::set<IntVec> n1 = oracle::normal_set(e1);
  CHECK(n1 == std::set<IntVec>{iv({1, -2}), iv({1, -1}), iv({2, -1})});
  auto e2 = walls::enumerate_walls(quadric(), surface_sheaf(2, {1, 0}, 3), K);
  std::set<IntVec> n2 = oracle::normal_set(e2);
  CHECK(n2 == std::set<IntVec>{iv({1, -6}), iv({1, -4}), iv({1, -2}), iv({3, -2})});
}

TEST_CASE("plane-bundle instance finds the documented wall") {
  SheafNumerics s = threefold_sheaf(bundle(), 2, {0, 0}, {2, 2});
  // Box around the image of h + (2/5) xi.
  RatVec center = lattice::power_map(bundle(), DivisorClass({Rat(1), Rat(2, 5)}))
                      .coords;
  CHECK(center == RatVec{Rat(24, 25), Rat(49, 25)});
  Region K;
  for (int mask = 0; mask < 4; ++mask) {
    RatVec v = center;
    v[0] += (mask & 1) ? Rat(1, 32) : Rat(-1, 32);
    v[1] += (mask & 2) ? Rat(1, 32) : Rat(-1, 32);
    K.vertices.push_back(v);
  }
  auto e = walls::enumerate_walls(bundle(), s, K);
  std::set<IntVec> normals = oracle::normal_set(e);
  CHECK(normals.count(iv({2, -1})) == 1);
  // Exact agreement with the box oracle on this threefold instance.
  CHECK(normals == oracle::box_walls(bundle(), s, K));
}

TEST_CASE("rank-one data and wall-free data give empty enumerations") {
  SheafNumerics line = surface_sheaf(1, {2, 3}, 7);
  auto e = walls::enumerate_walls(quadric(), line, walls::default_region(quadric()));
  CHECK(e.walls.empty());

  // Zero discriminant: the bound forces emptiness.
  SheafNumerics zero = surface_sheaf(2, {0, 0}, 0);
  e = walls::enumerate_walls(quadric(), zero, walls::default_region(quadric()));
  CHECK(e.walls.empty());
}

TEST_CASE("twist invariance of the enumerated wall hyperplanes") {
  const Region K = walls::default_region(quadric());
  SheafNumerics s = surface_sheaf(2, {1, 0}, 3);
  auto base = oracle::normal_set(walls::enumerate_walls(quadric(), s, K));
  for (auto d : {iv({1, 2}), iv({-1, 1}), iv({0, -2})}) {
    SheafNumerics t = walls::twist(quadric(), s, d);
    auto twisted = oracle::normal_set(walls::enumerate_walls(quadric(), t, K));
    CHECK(twisted == base);
  }
}

TEST_CASE("safety inflation only ever widens the candidate sweep") {
  const Region K = walls::default_region(quadric());
  SheafNumerics s = surface_sheaf(2, {1, 0}, 3);
  WallOptions lo, hi;
  lo.safety = 1;
  hi.safety = 8;
  auto el = walls::enumerate_walls(quadric(), s, K, lo);
  auto eh = walls::enumerate_walls(quadric(), s, K, hi);
  CHECK(eh.radius == 8 * el.radius);
  auto nl = oracle::normal_set(el);
  auto nh = oracle::normal_set(eh);
  for (const auto& n : nl) CHECK(nh.count(n) == 1);
  CHECK(eh.points_examined >= el.points_examined);
}

TEST_CASE("enumeration is deterministic and respects the candidate budget") {
  const Region K = walls::default_region(quadric());
  SheafNumerics s = surface_sheaf(3, {0, 0}, 3);
  auto a = walls::enumerate_walls(quadric(), s, K);
  auto b = walls::enumerate_walls(quadric(), s, K);
  CHECK(a.points_examined == b.points_examined);
  CHECK(a.candidates_tested == b.candidates_tested);
  REQUIRE(a.walls.size() == b.walls.size());
  for (size_t i = 0; i < a.walls.size(); ++i) {
    CHECK(a.walls[i].normal == b.walls[i].normal);
    CHECK(a.walls[i].zeta == b.walls[i].zeta);
    CHECK(a.walls[i].witness_point == b.walls[i].witness_point);
  }
  // Wall list is sorted by normal.
  for (size_t i = 0; i + 1 < a.walls.size(); ++i)
    CHECK(a.walls[i].normal < a.walls[i + 1].normal);

  WallOptions tiny;
  tiny.budget = 3;
  CHECK_THROWS_MATCHES(walls::enumerate_walls(quadric(), s, K, tiny), Error,
                       ErrorCodeIs(ErrorCode::EnumerationBudgetExceeded));
}

TEST_CASE("every returned wall annihilates its witness point") {
  const Region K = walls::default_region(quadric());
  for (const auto& cs : {surface_sheaf(2, {1, 0}, 3), surface_sheaf(3, {0, 0}, 3)}) {
    auto e = walls::enumerate_walls(quadric(), cs, K);
    for (const auto& w : e.walls) {
      Rat pairing(0);
      for (size_t i = 0; i < w.normal.size(); ++i)
        pairing += Rat(w.normal[i]) * w.witness_point[i];
      CHECK(pairing == 0);
      CHECK(w.neg_self_pairing > 0);
      CHECK(w.neg_self_pairing <= w.bound_value);
      CHECK(w.normal == primitive_vector(w.zeta));
      // Coset condition: zeta = -r1 c1 (mod rank).
      for (size_t i = 0; i < w.zeta.size(); ++i) {
        Int residue = w.zeta[i] + Int(w.r1) * cs.c1[i];
        CHECK(residue % cs.rank == 0);
      }
    }
  }
}

TEST_CASE("sheaf validation rejects malformed numerical data") {
  SheafNumerics s = surface_sheaf(0, {0, 0}, 2);
  CHECK_THROWS_MATCHES(walls::validate_sheaf(quadric(), s), Error,
                       ErrorCodeIs(ErrorCode::PreconditionViolated));
  s = surface_sheaf(2, {0, 0, 0}, 2);
  CHECK_THROWS_MATCHES(walls::validate_sheaf(quadric(), s), Error,
                       ErrorCodeIs(ErrorCode::DimensionMismatch));
  s = surface_sheaf(2, {0, 0}, 2);
  s.c2 = SymTensor(2, 1);  // wrong order for a surface
  CHECK_THROWS_MATCHES(walls::validate_sheaf(quadric(), s), Error,
                       ErrorCodeIs(ErrorCode::DimensionMismatch));
}
