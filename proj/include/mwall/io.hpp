#ifndef MWALL_IO_HPP
#define MWALL_IO_HPP

// JSON (de)serialisation for every artefact the toolkit reads or writes.
//
// Exactness discipline: every rational number is serialised as a canonical
// "p/q" string (plain "p" when the denominator is 1) and parsed back
// bit-exactly; no report field ever contains a floating-point value.
// Integer vectors (Chern classes, wall normals, minimal polynomials) are
// serialised as JSON integers.  Algebraic numbers always carry their
// primitive integer minimal polynomial (leading coefficient first) plus a
// certified rational isolating interval.  Object keys are emitted in sorted
// order and reports carry no timestamps, so identical inputs produce
// byte-identical bytes.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mwall/catalog.hpp"
#include "mwall/chambers.hpp"
#include "mwall/errors.hpp"
#include "mwall/kring.hpp"
#include "mwall/lattice.hpp"
#include "mwall/poly.hpp"
#include "mwall/rational.hpp"
#include "mwall/sheafmodel.hpp"
#include "mwall/walls.hpp"

namespace mwall::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Primitive values.
// ---------------------------------------------------------------------------

inline json rat_to_json(const Rat& x) { return json(rat_str(x)); }

inline Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer())
    return Rat(static_cast<long>(j.get<long long>()));
  if (!j.is_string())
    throw Error(ErrorCode::ParseError,
                where + ": expected a rational as a \"p/q\" string");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

inline json rat_vec_to_json(const RatVec& v) {
  json out = json::array();
  for (const Rat& x : v) out.push_back(rat_to_json(x));
  return out;
}

inline RatVec rat_vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array())
    throw Error(ErrorCode::ParseError, where + ": expected an array of rationals");
  RatVec out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(rat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json int_to_json(const Int& x) {
  if (x.fits_slong_p()) return json(static_cast<long long>(x.get_si()));
  return json(x.get_str());
}

inline Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Rat q;
    try {
      q = parse_rat(s);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
    if (q.get_den() != 1)
      throw Error(ErrorCode::ParseError,
                  where + ": expected an integer, got '" + s + "'");
    return q.get_num();
  }
  throw Error(ErrorCode::ParseError, where + ": expected an integer");
}

inline json int_vec_to_json(const IntVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(int_to_json(x));
  return out;
}

inline IntVec int_vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array())
    throw Error(ErrorCode::ParseError, where + ": expected an array of integers");
  IntVec out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

namespace detail {

inline const json& field(const json& j, const std::string& key,
                         const std::string& where) {
  if (!j.is_object())
    throw Error(ErrorCode::ParseError, where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  return *it;
}

inline int int_field(const json& j, const std::string& key,
                     const std::string& where) {
  const json& f = field(j, key, where);
  if (!f.is_number_integer())
    throw Error(ErrorCode::ParseError,
                where + "." + key + ": expected an integer");
  return f.get<int>();
}

inline std::string str_field(const json& j, const std::string& key,
                             const std::string& where,
                             const std::string& fallback = "",
                             bool required = true) {
  if (j.is_object()) {
    auto it = j.find(key);
    if (it != j.end()) {
      if (!it->is_string())
        throw Error(ErrorCode::ParseError,
                    where + "." + key + ": expected a string");
      return it->get<std::string>();
    }
  }
  if (required)
    throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  return fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Symmetric tensors: arrays of {"monomial": [indices], "value": "p/q"}.
// ---------------------------------------------------------------------------

inline json sym_tensor_to_json(const lattice::SymTensor& t) {
  json out = json::array();
  lattice::SymTensor::for_each_sorted_index(
      t.rank(), t.order(), [&](const std::vector<int>& idx) {
        Rat v = t.value(idx);
        if (v == 0) return;
        json entry;
        entry["monomial"] = idx;
        entry["value"] = rat_to_json(v);
        out.push_back(entry);
      });
  return out;
}

inline lattice::SymTensor sym_tensor_from_json(const json& j, int rank, int order,
                                               const std::string& where) {
  if (!j.is_array())
    throw Error(ErrorCode::ParseError,
                where + ": expected an array of {monomial, value} entries");
  lattice::SymTensor t(rank, order);
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string here = where + "[" + std::to_string(i) + "]";
    const json& mono = detail::field(j[i], "monomial", here);
    if (!mono.is_array() || static_cast<int>(mono.size()) != order)
      throw Error(ErrorCode::ParseError,
                  here + ".monomial: expected " + std::to_string(order) +
                      " basis indices");
    std::vector<int> idx;
    for (const auto& m : mono) {
      if (!m.is_number_integer())
        throw Error(ErrorCode::ParseError, here + ".monomial: expected integers");
      idx.push_back(m.get<int>());
    }
    for (int v : idx)
      if (v < 0 || v >= rank)
        throw Error(ErrorCode::ParseError,
                    here + ".monomial: index out of range [0, " +
                        std::to_string(rank - 1) + "]");
    t.set(idx, rat_from_json(detail::field(j[i], "value", here), here + ".value"));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Polarised lattices.
// ---------------------------------------------------------------------------

inline json lattice_to_json(const lattice::PolarisedLattice& L) {
  json out;
  out["name"] = L.name;
  out["dimension"] = L.dimension;
  out["rank"] = L.rank;
  out["form"] = sym_tensor_to_json(L.form);
  json gens = json::array();
  for (const auto& g : L.ample_gens) gens.push_back(rat_vec_to_json(g));
  out["ample_generators"] = gens;
  return out;
}

inline lattice::PolarisedLattice lattice_from_json(const json& j,
                                                   const std::string& where) {
  lattice::PolarisedLattice L;
  L.name = detail::str_field(j, "name", where, "lattice", false);
  L.dimension = detail::int_field(j, "dimension", where);
  L.rank = detail::int_field(j, "rank", where);
  if (L.dimension < 2 || L.rank < 1)
    throw Error(ErrorCode::ParseError,
                where + ": dimension must be >= 2 and rank >= 1");
  L.form = sym_tensor_from_json(detail::field(j, "form", where), L.rank,
                                L.dimension, where + ".form");
  const json& gens = detail::field(j, "ample_generators", where);
  if (!gens.is_array() || gens.empty())
    throw Error(ErrorCode::ParseError,
                where + ".ample_generators: expected a nonempty array");
  for (size_t i = 0; i < gens.size(); ++i)
    L.ample_gens.push_back(rat_vec_from_json(
        gens[i], where + ".ample_generators[" + std::to_string(i) + "]"));
  lattice::validate_lattice(L);
  return L;
}

// ---------------------------------------------------------------------------
// Cohomology models.
// ---------------------------------------------------------------------------

inline json model_to_json(const kring::CohomologyModel& m) {
  json out;
  out["name"] = m.name();
  out["dimension"] = m.dimension();
  json basis = json::array();
  for (const auto& b : m.basis()) {
    json e;
    e["name"] = b.name;
    e["degree"] = b.degree;
    basis.push_back(e);
  }
  out["basis"] = basis;
  json mult = json::array();
  for (size_t i = 0; i < m.basis_size(); ++i) {
    for (size_t j2 = i; j2 < m.basis_size(); ++j2) {
      RatVec ei(m.basis_size(), Rat(0)), ej(m.basis_size(), Rat(0));
      ei[i] = 1;
      ej[j2] = 1;
      RatVec prod = m.mul(ei, ej);
      bool zero = true;
      for (const Rat& x : prod)
        if (x != 0) zero = false;
      if (zero) continue;
      json e;
      e["i"] = i;
      e["j"] = j2;
      e["product"] = rat_vec_to_json(prod);
      mult.push_back(e);
    }
  }
  out["mult"] = mult;
  RatVec integ(m.basis_size());
  for (size_t i = 0; i < m.basis_size(); ++i) {
    RatVec ei(m.basis_size(), Rat(0));
    ei[i] = 1;
    integ[i] = m.integrate(ei);
  }
  out["integrate"] = rat_vec_to_json(integ);
  out["todd"] = rat_vec_to_json(m.todd());
  out["point_class"] = rat_vec_to_json(m.point_class());
  json emb = json::array();
  for (size_t i = 0; i < m.divisor_rank(); ++i) {
    RatVec coords(m.divisor_rank(), Rat(0));
    coords[i] = 1;
    emb.push_back(rat_vec_to_json(m.divisor_class(coords)));
  }
  out["divisor_embedding"] = emb;
  return out;
}

inline kring::CohomologyModel model_from_json(const json& j,
                                              const std::string& where) {
  std::string name = detail::str_field(j, "name", where, "model", false);
  int dimension = detail::int_field(j, "dimension", where);
  const json& jb = detail::field(j, "basis", where);
  if (!jb.is_array() || jb.empty())
    throw Error(ErrorCode::ParseError, where + ".basis: expected a nonempty array");
  std::vector<kring::BasisElement> basis;
  for (size_t i = 0; i < jb.size(); ++i) {
    const std::string here = where + ".basis[" + std::to_string(i) + "]";
    basis.push_back(kring::BasisElement{
        detail::str_field(jb[i], "name", here),
        detail::int_field(jb[i], "degree", here)});
  }
  const json& jm = detail::field(j, "mult", where);
  if (!jm.is_array())
    throw Error(ErrorCode::ParseError, where + ".mult: expected an array");
  std::map<std::pair<int, int>, RatVec> mult;
  for (size_t t = 0; t < jm.size(); ++t) {
    const std::string here = where + ".mult[" + std::to_string(t) + "]";
    int i = detail::int_field(jm[t], "i", here);
    int j2 = detail::int_field(jm[t], "j", here);
    if (i < 0 || j2 < 0 || i >= static_cast<int>(basis.size()) ||
        j2 >= static_cast<int>(basis.size()))
      throw Error(ErrorCode::ParseError, here + ": basis index out of range");
    if (i > j2) std::swap(i, j2);
    mult[{i, j2}] = rat_vec_from_json(detail::field(jm[t], "product", here),
                                      here + ".product");
  }
  RatVec integ = rat_vec_from_json(detail::field(j, "integrate", where),
                                   where + ".integrate");
  RatVec todd = rat_vec_from_json(detail::field(j, "todd", where), where + ".todd");
  RatVec point = rat_vec_from_json(detail::field(j, "point_class", where),
                                   where + ".point_class");
  const json& je = detail::field(j, "divisor_embedding", where);
  if (!je.is_array())
    throw Error(ErrorCode::ParseError,
                where + ".divisor_embedding: expected an array");
  std::vector<RatVec> emb;
  for (size_t i = 0; i < je.size(); ++i)
    emb.push_back(rat_vec_from_json(
        je[i], where + ".divisor_embedding[" + std::to_string(i) + "]"));
  return kring::CohomologyModel(name, dimension, basis, mult, integ, todd,
                                point, emb);
}

// ---------------------------------------------------------------------------
// Sheaf numerical data.
// ---------------------------------------------------------------------------

inline json sheaf_to_json(const walls::SheafNumerics& s) {
  json out;
  out["rank"] = s.rank;
  out["c1"] = int_vec_to_json(s.c1);
  out["c2"] = sym_tensor_to_json(s.c2);
  out["label"] = s.label;
  return out;
}

inline walls::SheafNumerics sheaf_from_json(const json& j,
                                            const lattice::PolarisedLattice& L,
                                            const std::string& where) {
  walls::SheafNumerics s;
  const json& jr = detail::field(j, "rank", where);
  if (!jr.is_number_integer() || jr.get<long long>() < 1)
    throw Error(ErrorCode::ParseError, where + ".rank: expected a positive integer");
  s.rank = static_cast<long>(jr.get<long long>());
  s.c1 = int_vec_from_json(detail::field(j, "c1", where), where + ".c1");
  if (static_cast<int>(s.c1.size()) != L.rank)
    throw Error(ErrorCode::ParseError,
                where + ".c1: expected " + std::to_string(L.rank) + " entries");
  s.c2 = sym_tensor_from_json(detail::field(j, "c2", where), L.rank,
                              L.dimension - 2, where + ".c2");
  s.label = detail::str_field(j, "label", where, "", false);
  walls::validate_sheaf(L, s);
  return s;
}

// ---------------------------------------------------------------------------
// Presented sheaves.
// ---------------------------------------------------------------------------

inline json presented_to_json(const sheafmodel::PresentedSheaf& F) {
  json out;
  out["kind"] = sheafmodel::presentation_kind_str(F.kind);
  if (F.kind == sheafmodel::PresentationKind::DirectSum) {
    json sums = json::array();
    for (const auto& s : F.summands) {
      json e;
      e["c1"] = int_vec_to_json(s.c1);
      if (!s.label.empty()) e["label"] = s.label;
      sums.push_back(e);
    }
    out["summands"] = sums;
  } else {
    out["total"] = sheaf_to_json(F.total);
    json subs = json::array();
    for (const auto& s : F.subobjects) subs.push_back(sheaf_to_json(s));
    out["subobjects"] = subs;
  }
  if (!F.label.empty()) out["label"] = F.label;
  return out;
}

inline sheafmodel::PresentedSheaf presented_from_json(
    const json& j, const lattice::PolarisedLattice& L, const std::string& where) {
  std::string kind = detail::str_field(j, "kind", where);
  std::string label = detail::str_field(j, "label", where, "", false);
  if (kind == "direct-sum") {
    const json& js = detail::field(j, "summands", where);
    if (!js.is_array() || js.empty())
      throw Error(ErrorCode::ParseError,
                  where + ".summands: expected a nonempty array");
    std::vector<IntVec> c1s;
    for (size_t i = 0; i < js.size(); ++i) {
      const std::string here = where + ".summands[" + std::to_string(i) + "]";
      if (js[i].is_array()) {
        c1s.push_back(int_vec_from_json(js[i], here));
      } else {
        c1s.push_back(
            int_vec_from_json(detail::field(js[i], "c1", here), here + ".c1"));
      }
      if (static_cast<int>(c1s.back().size()) != L.rank)
        throw Error(ErrorCode::ParseError,
                    here + ": expected " + std::to_string(L.rank) + " entries");
    }
    return sheafmodel::make_direct_sum(L, c1s, label);
  }
  if (kind == "filtered") {
    walls::SheafNumerics total =
        sheaf_from_json(detail::field(j, "total", where), L, where + ".total");
    const json& js = detail::field(j, "subobjects", where);
    if (!js.is_array())
      throw Error(ErrorCode::ParseError, where + ".subobjects: expected an array");
    std::vector<walls::SheafNumerics> subs;
    for (size_t i = 0; i < js.size(); ++i)
      subs.push_back(sheaf_from_json(
          js[i], L, where + ".subobjects[" + std::to_string(i) + "]"));
    return sheafmodel::make_filtered(L, total, subs, label);
  }
  throw Error(ErrorCode::ParseError,
              where + ".kind: expected \"direct-sum\" or \"filtered\"");
}

// ---------------------------------------------------------------------------
// Regions: explicit vertex lists or axis-aligned boxes around a point.
// ---------------------------------------------------------------------------

inline json region_to_json(const walls::Region& K) {
  json out;
  json verts = json::array();
  for (const auto& v : K.vertices) verts.push_back(rat_vec_to_json(v));
  out["vertices"] = verts;
  return out;
}

inline walls::Region region_from_json(const json& j, int rank,
                                      const std::string& where) {
  walls::Region K;
  if (j.is_object() && j.contains("vertices")) {
    const json& jv = j["vertices"];
    if (!jv.is_array() || jv.empty())
      throw Error(ErrorCode::ParseError,
                  where + ".vertices: expected a nonempty array");
    for (size_t i = 0; i < jv.size(); ++i) {
      RatVec v = rat_vec_from_json(jv[i],
                                   where + ".vertices[" + std::to_string(i) + "]");
      if (static_cast<int>(v.size()) != rank)
        throw Error(ErrorCode::ParseError,
                    where + ".vertices[" + std::to_string(i) + "]: expected " +
                        std::to_string(rank) + " coordinates");
      K.vertices.push_back(std::move(v));
    }
    return K;
  }
  if (j.is_object() && j.contains("around")) {
    RatVec center = rat_vec_from_json(j["around"], where + ".around");
    if (static_cast<int>(center.size()) != rank)
      throw Error(ErrorCode::ParseError,
                  where + ".around: expected " + std::to_string(rank) +
                      " coordinates");
    Rat radius = rat_from_json(detail::field(j, "radius", where),
                               where + ".radius");
    if (radius <= 0)
      throw Error(ErrorCode::ParseError, where + ".radius: must be positive");
    if (rank > 12)
      throw Error(ErrorCode::ParseError,
                  where + ": box regions limited to rank <= 12");
    for (long mask = 0; mask < (1L << rank); ++mask) {
      RatVec v = center;
      for (int i = 0; i < rank; ++i)
        v[i] += (mask >> i) & 1 ? radius : -radius;
      K.vertices.push_back(std::move(v));
    }
    return K;
  }
  throw Error(ErrorCode::ParseError,
              where + ": expected {\"vertices\": [...]} or {\"around\": [...], "
                      "\"radius\": \"p/q\"}");
}

// ---------------------------------------------------------------------------
// Algebraic numbers and crossing parameters.
// ---------------------------------------------------------------------------

// Minimal polynomial is emitted with the leading coefficient first.
inline json algebraic_to_json(const AlgebraicNumber& a) {
  json out;
  IntVec desc(a.minpoly.rbegin(), a.minpoly.rend());
  out["minpoly"] = int_vec_to_json(desc);
  out["interval"] = json::array({rat_to_json(a.lo), rat_to_json(a.hi)});
  return out;
}

inline json crossing_parameter_to_json(const chambers::CrossingParameter& c) {
  json out;
  out["is_rational"] = c.is_rational;
  out["multiplicity"] = c.multiplicity;
  if (c.is_rational) {
    out["value"] = rat_to_json(c.value);
  } else {
    json alg = algebraic_to_json(c.algebraic);
    out["minpoly"] = alg["minpoly"];
    out["interval"] = alg["interval"];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

inline json wall_to_json(const walls::Wall& w) {
  json out;
  out["normal"] = int_vec_to_json(w.normal);
  out["r1"] = w.r1;
  out["zeta"] = int_vec_to_json(w.zeta);
  out["witness_point"] = rat_vec_to_json(w.witness_point);
  out["neg_self_pairing"] = rat_to_json(w.neg_self_pairing);
  out["bound_value"] = rat_to_json(w.bound_value);
  return out;
}

inline json wall_enumeration_to_json(const walls::WallEnumeration& e) {
  json out;
  json ws = json::array();
  for (const auto& w : e.walls) ws.push_back(wall_to_json(w));
  out["walls"] = ws;
  out["wall_count"] = e.walls.size();
  out["radius"] = rat_to_json(e.radius);
  out["lambda"] = rat_to_json(e.lambda);
  out["points_examined"] = e.points_examined;
  out["candidates_tested"] = e.candidates_tested;
  return out;
}

inline json chamber_to_json(const chambers::Chamber& c) {
  json out;
  out["signs"] = c.signs;
  out["representative"] = rat_vec_to_json(c.representative);
  out["walls_active"] = c.walls_active;
  out["full_dimensional"] = c.full_dimensional;
  return out;
}

inline json chamber_representative_to_json(const chambers::ChamberRepresentative& r) {
  json out;
  out["a"] = int_vec_to_json(r.a);
  out["b"] = int_vec_to_json(r.b);
  out["scale"] = rat_to_json(r.scale);
  out["curve"] = rat_vec_to_json(r.curve);
  return out;
}

inline json curve_crossing_report_to_json(const chambers::CurveCrossingReport& r) {
  json out;
  json cs = json::array();
  for (const auto& c : r.crossings) {
    json e;
    e["value"] = rat_to_json(c.parameter);
    e["walls"] = c.walls;
    cs.push_back(e);
  }
  out["crossings"] = cs;
  out["walls_containing_segment"] = r.walls_containing_segment;
  return out;
}

inline json amp_crossing_result_to_json(const chambers::AmpCrossingResult& r) {
  json out;
  out["identically_zero"] = r.identically_zero;
  out["path_polynomial"] = rat_vec_to_json(r.path_polynomial);
  json cs = json::array();
  for (const auto& c : r.crossings) cs.push_back(crossing_parameter_to_json(c));
  out["crossings"] = cs;
  return out;
}

inline json verdict_to_json(const sheafmodel::Verdict& v) {
  json out;
  out["status"] = sheafmodel::stability_str(v.status);
  out["total_slope"] = rat_to_json(v.total_slope);
  out["gap"] = rat_to_json(v.gap);
  if (v.has_witness) {
    json w;
    w["rank"] = v.witness.rank;
    w["c1"] = int_vec_to_json(v.witness.c1);
    w["slope_gap"] = rat_to_json(v.gap);
    w["indices"] = v.witness_indices;
    out["witness"] = w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError,
                "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

// Serialise with sorted keys and a trailing newline; reports are
// byte-identical for identical inputs.
inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << content;
}

}  // namespace mwall::io

#endif  // MWALL_IO_HPP
