#ifndef MWALL_SELFCHECK_HPP
#define MWALL_SELFCHECK_HPP

// Cross-module invariant suite over the built-in catalog.  Each check is a
// theorem of the exact data (lattice/model agreement, index-theorem
// identities, inversion round trips, frozen demonstration pipelines), so a
// failure always indicates corrupted data or an implementation bug, never
// numerical noise.

#include <sstream>
#include <string>
#include <vector>

#include "mwall/catalog.hpp"
#include "mwall/chambers.hpp"
#include "mwall/errors.hpp"
#include "mwall/kring.hpp"
#include "mwall/lattice.hpp"
#include "mwall/rational.hpp"
#include "mwall/sheafmodel.hpp"
#include "mwall/walls.hpp"

namespace mwall::selfcheck {

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

namespace detail {

template <typename Fn>
void run(std::vector<CheckResult>& out, const std::string& name, Fn&& fn) {
  CheckResult r;
  r.name = name;
  try {
    std::string detail = fn();
    r.detail = detail;
  } catch (const Error& e) {
    r.pass = false;
    r.detail = std::string(e.what());
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("unexpected: ") + e.what();
  }
  out.push_back(std::move(r));
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::InternalInconsistency, msg);
}

// Exact intersection numbers computed in the cohomology model must agree
// with the lattice form on every degree-n monomial in the divisor basis.
inline void model_lattice_agreement(const catalog::CatalogEntry& entry) {
  const auto& L = entry.lattice;
  const auto& m = entry.model;
  require(m.dimension() == L.dimension, "model/lattice dimension mismatch");
  require(static_cast<int>(m.divisor_rank()) == L.rank,
          "model/lattice divisor rank mismatch");
  lattice::SymTensor::for_each_sorted_index(
      L.rank, L.dimension, [&](const std::vector<int>& idx) {
        RatVec prod = m.unit();
        for (int v : idx) {
          RatVec coords(static_cast<size_t>(L.rank), Rat(0));
          coords[v] = 1;
          prod = m.mul(prod, m.divisor_class(coords));
        }
        require(m.integrate(prod) == L.form.value(idx),
                "intersection numbers disagree between model and lattice");
      });
}

inline RatVec gen_sum(const lattice::PolarisedLattice& L) {
  RatVec s(static_cast<size_t>(L.rank), Rat(0));
  for (const auto& g : L.ample_gens) s = vec_add(s, g);
  return s;
}

}  // namespace detail

inline std::vector<CheckResult> run_all() {
  std::vector<CheckResult> out;
  for (const std::string& name : catalog::names()) {
    const catalog::CatalogEntry& entry = catalog::get(name);
    const lattice::PolarisedLattice& L = entry.lattice;
    const kring::CohomologyModel& m = entry.model;

    detail::run(out, name + ": lattice axioms", [&] {
      lattice::validate_lattice(L);
      return "";
    });

    detail::run(out, name + ": model/lattice intersection agreement", [&] {
      detail::model_lattice_agreement(entry);
      return "";
    });

    detail::run(out, name + ": index-sign certificate at barycenter", [&] {
      lattice::DivisorClass bary = lattice::ample_barycenter(L);
      auto res = lattice::verify_hodge_index(L, bary);
      detail::require(res.negative_definite,
                      "restricted form not negative definite at barycenter");
      return "";
    });

    detail::run(out, name + ": product log-concavity at generator pair", [&] {
      lattice::DivisorClass bary = lattice::ample_barycenter(L);
      lattice::DivisorClass other =
          L.ample_gens.size() > 1 ? lattice::DivisorClass(L.ample_gens[1])
                                  : bary;
      auto kt = lattice::khovanskii_teissier(L, bary, other);
      detail::require(kt.all_nonnegative, "mixed-product slack negative");
      return "";
    });

    detail::run(out, name + ": power-map inversion round trip", [&] {
      RatVec bary = lattice::ample_barycenter(L).coords;
      RatVec mixed = vec_add(vec_scale(Rat(2, 3), bary),
                             vec_scale(Rat(1, 3), L.ample_gens[0]));
      // Nudge off the seed so the iteration has actual work to do.
      mixed = vec_add(mixed, vec_scale(Rat(1, 5), L.ample_gens.back()));
      lattice::CurveClass target =
          lattice::power_map(L, lattice::DivisorClass{mixed});
      lattice::NewtonResult res = lattice::newton_invert_power(L, target);
      lattice::CurveClass back = lattice::power_map(L, res.alpha);
      Rat err = sup_norm(vec_sub(back.coords, target.coords));
      lattice::NewtonSettings defaults;
      detail::require(err <= defaults.tolerance,
                      "round-trip residual above tolerance");
      return "iterations: " + std::to_string(res.iterations);
    });

    detail::run(out, name + ": index-theorem identities", [&] {
      const int n = m.dimension();
      RatVec hcoords = detail::gen_sum(L);
      kring::HList hs;
      for (int i = 0; i + 1 < n; ++i) hs.divisors.push_back(hcoords);
      // O_X and O_X + O_X(D): exact index identities must hold for both.
      std::vector<kring::KClass> classes;
      classes.push_back(kring::KClass(m.unit()));
      classes.push_back(kring::KClass(
          vec_add(m.unit(), kring::line_class(m, hcoords).ch)));
      std::vector<long> scales(hs.divisors.size());
      for (size_t i = 0; i < scales.size(); ++i) scales[i] = 2 + (i % 2);
      for (const auto& c : classes) {
        auto second = kring::verify_secondway(m, c, hs);
        detail::require(second.ok, "restriction identity (class level) failed");
        auto first = kring::verify_firstway_virtual(m, c, hs);
        detail::require(first.ok, "restriction identity (paired level) failed");
        auto scaling = kring::verify_scaling(m, c, hs, scales);
        detail::require(scaling.ok, "scaling covariance failed");
        auto tele = kring::verify_telescoping(m, c, hs);
        detail::require(tele.ok, "telescoping chain failed");
      }
      return "";
    });
  }

  // Frozen demonstration pipelines with independently computed outcomes.
  detail::run(out, "pipeline: quadric wall enumeration", [&] {
    const auto& entry = catalog::get("p1xp1");
    walls::SheafNumerics s;
    s.rank = 2;
    s.c1 = IntVec{Int(0), Int(0)};
    s.c2 = lattice::SymTensor(2, 0);
    s.c2.set({}, Rat(2));
    s.label = "rank-2, c1 = 0, c2 = 2";
    walls::Region K = walls::default_region(entry.lattice);
    walls::WallEnumeration res = walls::enumerate_walls(entry.lattice, s, K);
    detail::require(res.walls.size() == 1, "expected exactly one wall");
    detail::require(res.walls[0].normal == IntVec{Int(1), Int(-1)},
                    "expected the antidiagonal wall");
    return "";
  });

  detail::run(out, "pipeline: segment chamber decomposition", [&] {
    const auto& entry = catalog::get("p1xp1");
    walls::Region K;
    K.vertices = {{Rat(1), Rat(2)}, {Rat(2), Rat(1)}};
    std::vector<IntVec> normals = {IntVec{Int(1), Int(-1)}};
    auto cells = chambers::decompose(K, normals);
    detail::require(cells.size() == 3, "expected three cells");
    auto cross = chambers::segment_crossings_curve(normals, K.vertices[0],
                                                   K.vertices[1]);
    detail::require(cross.crossings.size() == 1 &&
                        cross.crossings[0].parameter == Rat(1, 2),
                    "expected a single crossing at 1/2");
    (void)entry;
    return "";
  });

  detail::run(out, "pipeline: split-sheaf verdicts", [&] {
    const auto& entry = catalog::get("p1cubed");
    sheafmodel::PresentedSheaf F = sheafmodel::make_direct_sum(
        entry.lattice,
        {IntVec{Int(1), Int(-1), Int(0)}, IntVec{Int(-1), Int(1), Int(0)}});
    auto v1 = sheafmodel::verdict(entry.lattice, F,
                                  lattice::CurveClass{{Rat(1), Rat(1), Rat(1)}});
    detail::require(v1.status == sheafmodel::Stability::ProperlySemistable,
                    "balanced class should be properly semistable");
    auto v2 = sheafmodel::verdict(entry.lattice, F,
                                  lattice::CurveClass{{Rat(2), Rat(1), Rat(1)}});
    detail::require(v2.status == sheafmodel::Stability::Unstable &&
                        v2.gap == Rat(1),
                    "tilted class should be unstable with gap 1");
    return "";
  });

  return out;
}

}  // namespace mwall::selfcheck

#endif  // MWALL_SELFCHECK_HPP
