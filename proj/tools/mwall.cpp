// mwall: exact-arithmetic toolkit for slope-stability walls and chambers on
// polarised intersection lattices.
//
// Subcommands: walls, chambers, cross, kverify, catalog list/show, selfcheck.
// All reports are JSON with "p/q" string rationals (byte-identical for
// identical inputs); raster slices are CSV.  Exit codes: 0 success,
// 2 configuration/input error, 3 budget exceeded, 4 internal inconsistency.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwall/catalog.hpp"
#include "mwall/chambers.hpp"
#include "mwall/errors.hpp"
#include "mwall/io.hpp"
#include "mwall/kring.hpp"
#include "mwall/lattice.hpp"
#include "mwall/rng.hpp"
#include "mwall/selfcheck.hpp"
#include "mwall/sheafmodel.hpp"
#include "mwall/walls.hpp"

namespace {

using mwall::Error;
using mwall::ErrorCode;
using mwall::Int;
using mwall::IntVec;
using mwall::Rat;
using mwall::RatVec;
using nlohmann::json;

struct Config {
  std::string catalog_name;
  std::string lattice_path;
  std::string model_path;
  std::string sheaf_path;
  std::string region_spec = "default";
  std::string safety = "4";
  long budget = 1000000;
  std::uint64_t seed = 0;
  std::string out;
  std::string slice_path;
  int grid = 64;
  bool representatives = false;
  std::string mode;
  std::string preset;
  std::string show_name;
};

mwall::lattice::PolarisedLattice load_lattice(const Config& cfg) {
  if (!cfg.lattice_path.empty()) {
    json j = mwall::io::load_json(cfg.lattice_path);
    return mwall::io::lattice_from_json(j, cfg.lattice_path);
  }
  if (!cfg.catalog_name.empty())
    return mwall::catalog::get(cfg.catalog_name).lattice;
  throw Error(ErrorCode::ParseError,
              "a lattice is required: pass --catalog NAME or --lattice FILE");
}

mwall::kring::CohomologyModel load_model(const Config& cfg,
                                         const mwall::lattice::PolarisedLattice& L) {
  mwall::kring::CohomologyModel m;
  if (!cfg.model_path.empty()) {
    json j = mwall::io::load_json(cfg.model_path);
    m = mwall::io::model_from_json(j, cfg.model_path);
  } else if (!cfg.catalog_name.empty()) {
    m = mwall::catalog::get(cfg.catalog_name).model;
  } else {
    throw Error(ErrorCode::ParseError,
                "a cohomology model is required: pass --catalog NAME or "
                "--model FILE");
  }
  if (m.dimension() != L.dimension ||
      static_cast<int>(m.divisor_rank()) != L.rank)
    throw Error(ErrorCode::ModelMismatch,
                "model dimension/divisor rank (" +
                    std::to_string(m.dimension()) + ", " +
                    std::to_string(m.divisor_rank()) +
                    ") do not match the lattice (" +
                    std::to_string(L.dimension) + ", " +
                    std::to_string(L.rank) + ")");
  return m;
}

mwall::walls::Region load_region(const Config& cfg,
                                 const mwall::lattice::PolarisedLattice& L) {
  if (cfg.region_spec == "default") return mwall::walls::default_region(L);
  json j = mwall::io::load_json(cfg.region_spec);
  mwall::walls::Region K =
      mwall::io::region_from_json(j, L.rank, cfg.region_spec);
  mwall::walls::validate_region(L, K);
  return K;
}

mwall::walls::SheafNumerics load_sheaf(const Config& cfg,
                                       const mwall::lattice::PolarisedLattice& L) {
  if (cfg.sheaf_path.empty())
    throw Error(ErrorCode::ParseError,
                "sheaf numerical data required: pass --sheaf FILE");
  json j = mwall::io::load_json(cfg.sheaf_path);
  return mwall::io::sheaf_from_json(j, L, cfg.sheaf_path);
}

mwall::walls::WallOptions wall_options(const Config& cfg) {
  mwall::walls::WallOptions opts;
  opts.safety = mwall::parse_rat(cfg.safety);
  if (opts.safety <= 0)
    throw Error(ErrorCode::ParseError, "--safety must be a positive rational");
  opts.budget = cfg.budget;
  return opts;
}

void emit(const Config& cfg, const json& report) {
  std::string text = mwall::io::dump_json(report);
  if (cfg.out.empty())
    std::cout << text;
  else
    mwall::io::write_file(cfg.out, text);
}

json config_echo(const Config& cfg, const mwall::lattice::PolarisedLattice& L) {
  json out;
  out["lattice"] = L.name;
  out["safety"] = mwall::rat_str(mwall::parse_rat(cfg.safety));
  out["budget"] = cfg.budget;
  out["seed"] = cfg.seed;
  return out;
}

// ---------------------------------------------------------------------------
// walls
// ---------------------------------------------------------------------------

int cmd_walls(const Config& cfg) {
  auto L = load_lattice(cfg);
  auto s = load_sheaf(cfg, L);
  auto K = load_region(cfg, L);
  auto res = mwall::walls::enumerate_walls(L, s, K, wall_options(cfg));
  json report;
  report["command"] = "walls";
  report["config"] = config_echo(cfg, L);
  report["sheaf"] = mwall::io::sheaf_to_json(s);
  report["region"] = mwall::io::region_to_json(K);
  report["result"] = mwall::io::wall_enumeration_to_json(res);
  emit(cfg, report);
  return 0;
}

// ---------------------------------------------------------------------------
// chambers
// ---------------------------------------------------------------------------

void write_slice_csv(const Config& cfg,
                     const std::vector<mwall::chambers::Chamber>& cells,
                     const std::vector<IntVec>& normals, int rank) {
  json spec = mwall::io::load_json(cfg.slice_path);
  RatVec origin = mwall::io::rat_vec_from_json(
      mwall::io::detail::field(spec, "origin", cfg.slice_path),
      cfg.slice_path + ".origin");
  RatVec du = mwall::io::rat_vec_from_json(
      mwall::io::detail::field(spec, "du", cfg.slice_path),
      cfg.slice_path + ".du");
  RatVec dv = mwall::io::rat_vec_from_json(
      mwall::io::detail::field(spec, "dv", cfg.slice_path),
      cfg.slice_path + ".dv");
  if (static_cast<int>(origin.size()) != rank ||
      static_cast<int>(du.size()) != rank ||
      static_cast<int>(dv.size()) != rank)
    throw Error(ErrorCode::ParseError,
                cfg.slice_path + ": origin/du/dv must have " +
                    std::to_string(rank) + " coordinates");
  if (cfg.grid < 2)
    throw Error(ErrorCode::ParseError, "--grid must be at least 2");
  std::ostringstream csv;
  const long g = cfg.grid;
  for (long row = 0; row < g; ++row) {
    Rat t_row(row, g - 1);
    for (long col = 0; col < g; ++col) {
      Rat t_col(col, g - 1);
      RatVec p = origin;
      p = mwall::vec_add(p, mwall::vec_scale(t_col, du));
      p = mwall::vec_add(p, mwall::vec_scale(t_row, dv));
      long id = mwall::chambers::find_cell(cells, normals, p);
      if (col) csv << ",";
      csv << id;
    }
    csv << "\n";
  }
  std::string path = cfg.out.empty() ? "" : cfg.out + ".csv";
  if (path.empty())
    std::cout << csv.str();
  else
    mwall::io::write_file(path, csv.str());
}

int cmd_chambers(const Config& cfg) {
  auto L = load_lattice(cfg);
  auto s = load_sheaf(cfg, L);
  auto K = load_region(cfg, L);
  auto enumeration = mwall::walls::enumerate_walls(L, s, K, wall_options(cfg));
  std::vector<IntVec> normals;
  for (const auto& w : enumeration.walls) normals.push_back(w.normal);
  auto cells = mwall::chambers::decompose(K, normals);

  json report;
  report["command"] = "chambers";
  report["config"] = config_echo(cfg, L);
  report["sheaf"] = mwall::io::sheaf_to_json(s);
  report["region"] = mwall::io::region_to_json(K);
  json jnormals = json::array();
  for (const auto& n : normals) jnormals.push_back(mwall::io::int_vec_to_json(n));
  report["walls"] = jnormals;
  json jcells = json::array();
  for (const auto& cell : cells) {
    json jc = mwall::io::chamber_to_json(cell);
    if (cfg.representatives) {
      auto rep = mwall::chambers::chamber_representative(
          L, cell.representative, std::nullopt, &cell.signs, &normals);
      jc["complete_intersection"] =
          mwall::io::chamber_representative_to_json(rep);
    }
    jcells.push_back(jc);
  }
  report["cells"] = jcells;
  report["cell_count"] = cells.size();
  emit(cfg, report);

  if (!cfg.slice_path.empty()) write_slice_csv(cfg, cells, normals, L.rank);
  return 0;
}

// ---------------------------------------------------------------------------
// cross
// ---------------------------------------------------------------------------

int cmd_cross(const Config& cfg) {
  if (cfg.mode != "n1" && cfg.mode != "amp")
    throw Error(ErrorCode::ParseError, "--mode must be n1 or amp");

  mwall::lattice::PolarisedLattice L;
  std::vector<IntVec> normals;
  RatVec g0, g1;        // curve-class segment (n1 mode)
  RatVec h0, h1;        // ample divisor segment (amp mode)

  if (cfg.preset == "schmitt-demo") {
    // A rank-2 class on the plane bundle whose unique wall crosses the
    // parameter segment at a rational point in moving-curve form and at a
    // certified irrational (degree-2) point in polarisation form.
    L = mwall::catalog::get("proj-bundle-p2").lattice;
    normals = {IntVec{Int(2), Int(-1)}};
    h0 = {Rat(1), Rat(1, 5)};
    h1 = {Rat(1), Rat(4, 5)};
    g0 = mwall::lattice::power_map(L, mwall::lattice::DivisorClass{h0}).coords;
    g1 = mwall::lattice::power_map(L, mwall::lattice::DivisorClass{h1}).coords;
  } else if (!cfg.preset.empty()) {
    throw Error(ErrorCode::ParseError,
                "unknown preset '" + cfg.preset + "' (available: schmitt-demo)");
  } else {
    L = load_lattice(cfg);
    auto s = load_sheaf(cfg, L);
    auto K = load_region(cfg, L);
    if (K.vertices.size() < 2 || K.vertices[0] == K.vertices[1])
      throw Error(ErrorCode::ParseError,
                  "cross needs a region whose first two vertices are distinct "
                  "(they define the segment)");
    auto enumeration = mwall::walls::enumerate_walls(L, s, K, wall_options(cfg));
    for (const auto& w : enumeration.walls) normals.push_back(w.normal);
    g0 = K.vertices[0];
    g1 = K.vertices[1];
    auto cert = mwall::walls::certify_region(L, K);
    h0 = cert.vertex_preimages[0].coords;
    h1 = cert.vertex_preimages[1].coords;
  }

  json report;
  report["command"] = "cross";
  report["mode"] = cfg.mode;
  if (!cfg.preset.empty()) report["preset"] = cfg.preset;
  report["lattice"] = L.name;
  json jnormals = json::array();
  for (const auto& n : normals) jnormals.push_back(mwall::io::int_vec_to_json(n));
  report["walls"] = jnormals;

  if (cfg.mode == "n1") {
    report["segment"] = json::array(
        {mwall::io::rat_vec_to_json(g0), mwall::io::rat_vec_to_json(g1)});
    auto res = mwall::chambers::segment_crossings_curve(normals, g0, g1);
    report["result"] = mwall::io::curve_crossing_report_to_json(res);
  } else {
    report["segment"] = json::array(
        {mwall::io::rat_vec_to_json(h0), mwall::io::rat_vec_to_json(h1)});
    json per_wall = json::array();
    for (const auto& normal : normals) {
      auto res = mwall::chambers::segment_crossings_ample(
          L, normal, mwall::lattice::DivisorClass{h0},
          mwall::lattice::DivisorClass{h1});
      json e;
      e["normal"] = mwall::io::int_vec_to_json(normal);
      e["result"] = mwall::io::amp_crossing_result_to_json(res);
      per_wall.push_back(e);
    }
    report["result"] = per_wall;
  }
  emit(cfg, report);
  return 0;
}

// ---------------------------------------------------------------------------
// kverify
// ---------------------------------------------------------------------------

int cmd_kverify(const Config& cfg) {
  auto L = load_lattice(cfg);
  auto m = load_model(cfg, L);
  const int n = m.dimension();

  RatVec gen_sum(static_cast<size_t>(L.rank), Rat(0));
  for (const auto& g : L.ample_gens) gen_sum = mwall::vec_add(gen_sum, g);

  mwall::kring::HList H;
  std::vector<std::pair<std::string, mwall::kring::KClass>> classes;
  bool explicit_list = false;

  if (!cfg.sheaf_path.empty()) {
    // Class-list file: {"divisors": [[p/q,...] x (n-1)]?, "classes": [[ch]]}.
    json j = mwall::io::load_json(cfg.sheaf_path);
    explicit_list = true;
    if (j.contains("divisors")) {
      const json& jd = j["divisors"];
      if (!jd.is_array())
        throw Error(ErrorCode::ParseError,
                    cfg.sheaf_path + ".divisors: expected an array");
      for (size_t i = 0; i < jd.size(); ++i)
        H.divisors.push_back(mwall::io::rat_vec_from_json(
            jd[i], cfg.sheaf_path + ".divisors[" + std::to_string(i) + "]"));
    }
    const json& jc = mwall::io::detail::field(j, "classes", cfg.sheaf_path);
    if (!jc.is_array())
      throw Error(ErrorCode::ParseError,
                  cfg.sheaf_path + ".classes: expected an array");
    for (size_t i = 0; i < jc.size(); ++i) {
      RatVec ch = mwall::io::rat_vec_from_json(
          jc[i], cfg.sheaf_path + ".classes[" + std::to_string(i) + "]");
      if (ch.size() != m.basis_size())
        throw Error(ErrorCode::ParseError,
                    cfg.sheaf_path + ".classes[" + std::to_string(i) +
                        "]: expected " + std::to_string(m.basis_size()) +
                        " coordinates over the model basis");
      classes.emplace_back("class " + std::to_string(i),
                           mwall::kring::KClass(ch));
    }
  }
  if (H.divisors.empty())
    for (int i = 0; i + 1 < n; ++i) H.divisors.push_back(gen_sum);

  if (!explicit_list) {
    classes.emplace_back("structure sheaf", mwall::kring::KClass(m.unit()));
    classes.emplace_back("line class on generator sum",
                         mwall::kring::line_class(m, gen_sum));
    classes.emplace_back(
        "rank-2 split class",
        mwall::kring::KClass(mwall::vec_add(
            m.unit(), mwall::kring::line_class(m, gen_sum).ch)));
    // Two seeded random line classes keep the families honest on fresh data.
    mwall::Rng rng(cfg.seed);
    for (int t = 0; t < 2; ++t) {
      RatVec d(static_cast<size_t>(L.rank));
      for (auto& x : d) x = Rat(rng.integer(-3, 3));
      classes.emplace_back("seeded line class " + std::to_string(t),
                           mwall::kring::line_class(m, d));
    }
  }

  json jclasses = json::array();
  bool all_ok = true;
  for (const auto& [label, c] : classes) {
    json e;
    e["label"] = label;
    std::vector<long> scales(H.divisors.size());
    for (size_t i = 0; i < scales.size(); ++i) scales[i] = 2 + (i % 2);
    auto second = mwall::kring::verify_secondway(m, c, H);
    auto first = mwall::kring::verify_firstway_virtual(m, c, H);
    auto scaling = mwall::kring::verify_scaling(m, c, H, scales);
    auto tele = mwall::kring::verify_telescoping(m, c, H);
    e["secondway"] = {{"ok", second.ok},
                      {"defect", mwall::io::rat_vec_to_json(second.defect)}};
    e["firstway"] = {{"ok", first.ok},
                     {"defect", mwall::io::rat_vec_to_json(first.defect)}};
    e["scaling"] = {{"ok", scaling.ok}};
    e["telescoping"] = {{"ok", tele.ok},
                        {"steps", tele.steps.size()},
                        {"overall_factor", mwall::rat_str(tele.overall_factor)}};
    all_ok = all_ok && second.ok && first.ok && scaling.ok && tele.ok;
    jclasses.push_back(e);
  }

  json report;
  report["command"] = "kverify";
  report["model"] = m.name();
  report["dimension"] = n;
  report["divisors"] = [&] {
    json a = json::array();
    for (const auto& d : H.divisors) a.push_back(mwall::io::rat_vec_to_json(d));
    return a;
  }();
  report["classes"] = jclasses;
  report["all_pass"] = all_ok;
  emit(cfg, report);
  if (!all_ok) {
    std::cerr << "kverify: identity family failed (see report)\n";
    return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// catalog / selfcheck
// ---------------------------------------------------------------------------

int cmd_catalog_list(const Config& cfg) {
  json out = json::array();
  for (const auto& name : mwall::catalog::names()) {
    const auto& entry = mwall::catalog::get(name);
    json e;
    e["name"] = entry.name;
    e["description"] = entry.description;
    e["dimension"] = entry.lattice.dimension;
    e["rank"] = entry.lattice.rank;
    out.push_back(e);
  }
  emit(cfg, out);
  return 0;
}

int cmd_catalog_show(const Config& cfg) {
  const auto& entry = mwall::catalog::get(cfg.show_name);
  json out;
  out["name"] = entry.name;
  out["description"] = entry.description;
  out["lattice"] = mwall::io::lattice_to_json(entry.lattice);
  out["model"] = mwall::io::model_to_json(entry.model);
  emit(cfg, out);
  return 0;
}

int cmd_selfcheck(const Config& cfg) {
  auto results = mwall::selfcheck::run_all();
  json out;
  json checks = json::array();
  int failures = 0;
  for (const auto& r : results) {
    json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    if (!r.detail.empty()) e["detail"] = r.detail;
    checks.push_back(e);
    if (!r.pass) ++failures;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name
              << (r.pass || r.detail.empty() ? "" : " (" + r.detail + ")")
              << "\n";
  }
  out["command"] = "selfcheck";
  out["checks"] = checks;
  out["failures"] = failures;
  emit(cfg, out);
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact slope-stability wall/chamber toolkit"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool sheaf, bool region) {
    sub->add_option("--catalog", cfg.catalog_name, "built-in catalog entry");
    sub->add_option("--lattice", cfg.lattice_path, "polarised lattice JSON");
    sub->add_option("--out", cfg.out, "write the report to this file");
    sub->add_option("--seed", cfg.seed, "seed for deterministic sampling");
    if (sheaf)
      sub->add_option("--sheaf", cfg.sheaf_path, "sheaf numerical data JSON");
    if (region) {
      sub->add_option("--region", cfg.region_spec,
                      "region JSON path or 'default'");
      sub->add_option("--safety", cfg.safety,
                      "enumeration radius safety factor (rational)");
      sub->add_option("--budget", cfg.budget, "lattice point budget");
    }
  };

  CLI::App* walls = app.add_subcommand("walls", "enumerate candidate walls");
  add_common(walls, true, true);
  walls->callback([&] { std::exit(cmd_walls(cfg)); });

  CLI::App* chambers =
      app.add_subcommand("chambers", "decompose a region into chambers");
  add_common(chambers, true, true);
  chambers->add_flag("--representatives", cfg.representatives,
                     "emit complete-intersection representatives per cell");
  chambers->add_option("--slice", cfg.slice_path,
                       "plane spec JSON for a CSV raster of cell ids");
  chambers->add_option("--grid", cfg.grid, "raster resolution per axis");
  chambers->callback([&] { std::exit(cmd_chambers(cfg)); });

  CLI::App* cross =
      app.add_subcommand("cross", "crossing parameters along a segment");
  add_common(cross, true, true);
  cross->add_option("--mode", cfg.mode, "n1 (curve segment) or amp (ample segment)")
      ->required();
  cross->add_option("--preset", cfg.preset, "built-in demo (schmitt-demo)");
  cross->callback([&] { std::exit(cmd_cross(cfg)); });

  CLI::App* kverify =
      app.add_subcommand("kverify", "verify index-theorem identity families");
  add_common(kverify, true, false);
  kverify->add_option("--model", cfg.model_path, "cohomology model JSON");
  kverify->callback([&] { std::exit(cmd_kverify(cfg)); });

  CLI::App* cat = app.add_subcommand("catalog", "built-in catalog");
  cat->require_subcommand(1);
  CLI::App* cat_list = cat->add_subcommand("list", "list catalog entries");
  cat_list->add_option("--out", cfg.out, "write the report to this file");
  cat_list->callback([&] { std::exit(cmd_catalog_list(cfg)); });
  CLI::App* cat_show = cat->add_subcommand("show", "show one catalog entry");
  cat_show->add_option("name", cfg.show_name, "entry name")->required();
  cat_show->add_option("--out", cfg.out, "write the report to this file");
  cat_show->callback([&] { std::exit(cmd_catalog_show(cfg)); });

  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "run the full invariant suite");
  selfcheck->add_option("--out", cfg.out, "write the report to this file");
  selfcheck->callback([&] { std::exit(cmd_selfcheck(cfg)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mwall::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
