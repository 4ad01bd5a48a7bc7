#ifndef MWALL_CATALOG_HPP
#define MWALL_CATALOG_HPP

// Built-in catalog of polarised intersection lattices with matching
// cohomology models.  Every entry carries exact integral/rational data:
//
//   p2              the projective plane
//   p3              projective three-space
//   p1xp1           a quadric surface (product of two lines)
//   p1xp2           the product of a line and a plane
//   p1cubed         the triple product of lines
//   proj-bundle-p2  the plane bundle P(O + O(1)) over the plane
//
// The four product entries are generated from one exact routine (monomial
// basis with per-factor degree caps, multinomial intersection numbers,
// factorised Todd class); the projective bundle is written out by hand from
// its defining relation xi^2 = h xi.

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mwall/errors.hpp"
#include "mwall/kring.hpp"
#include "mwall/lattice.hpp"
#include "mwall/rational.hpp"

namespace mwall::catalog {

using lattice::PolarisedLattice;
using lattice::SymTensor;
using kring::BasisElement;
using kring::CohomologyModel;

struct CatalogEntry {
  std::string name;
  std::string description;
  PolarisedLattice lattice;
  CohomologyModel model;
};

namespace detail {

// Todd-class coefficients of projective space by dimension:
// td(P^m) = sum_d coeff[m][d] h^d.
inline const std::vector<Rat>& projective_todd(int m) {
  static const std::vector<std::vector<Rat>> table = {
      {Rat(1)},
      {Rat(1), Rat(1)},
      {Rat(1), Rat(3, 2), Rat(1)},
      {Rat(1), Rat(2), Rat(11, 6), Rat(1)},
  };
  if (m < 0 || m >= static_cast<int>(table.size()))
    throw Error(ErrorCode::PreconditionViolated,
                "no Todd table for projective factors of dimension " +
                    std::to_string(m));
  return table[m];
}

inline std::string monomial_name(const std::vector<int>& exps) {
  std::string out;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "h" + std::to_string(i + 1);
    if (exps[i] > 1) out += "^" + std::to_string(exps[i]);
  }
  return out.empty() ? "1" : out;
}

// Exact model of a product of projective spaces with factor dimensions
// dims.  The cohomology basis is the set of monomials in the factor
// hyperplane classes with exponents capped by the factor dimensions, the
// intersection number of n hyperplane pullbacks is 1 exactly when each
// factor appears with multiplicity equal to its dimension, and the Todd
// class factorises, so its coefficient on a monomial is the product of the
// per-factor Todd coefficients.
inline CatalogEntry product_of_projective_spaces(const std::string& name,
                                                 const std::string& description,
                                                 const std::vector<int>& dims) {
  const int k = static_cast<int>(dims.size());
  const int n = std::accumulate(dims.begin(), dims.end(), 0);

  // Exponent tuples, ordered by total degree then lexicographically.
  std::vector<std::vector<int>> exps;
  {
    std::vector<int> cur(k, 0);
    bool done = false;
    while (!done) {
      exps.push_back(cur);
      int pos = k - 1;
      while (pos >= 0 && cur[pos] == dims[pos]) cur[pos--] = 0;
      if (pos < 0) done = true;
      else ++cur[pos];
    }
    std::sort(exps.begin(), exps.end(), [](const std::vector<int>& a,
                                           const std::vector<int>& b) {
      int da = std::accumulate(a.begin(), a.end(), 0);
      int db = std::accumulate(b.begin(), b.end(), 0);
      if (da != db) return da < db;
      return a < b;
    });
  }
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < exps.size(); ++i) index[exps[i]] = static_cast<int>(i);
  const size_t nb = exps.size();

  std::vector<BasisElement> basis;
  for (const auto& e : exps)
    basis.push_back(BasisElement{monomial_name(e),
                                 std::accumulate(e.begin(), e.end(), 0)});

  std::map<std::pair<int, int>, RatVec> mult;
  for (size_t i = 0; i < nb; ++i) {
    for (size_t j = i; j < nb; ++j) {
      std::vector<int> sum(k);
      bool in_range = true;
      for (int f = 0; f < k; ++f) {
        sum[f] = exps[i][f] + exps[j][f];
        if (sum[f] > dims[f]) in_range = false;
      }
      if (!in_range) continue;  // the product vanishes
      RatVec row(nb, Rat(0));
      row[index[sum]] = 1;
      mult[{static_cast<int>(i), static_cast<int>(j)}] = std::move(row);
    }
  }

  RatVec integrate(nb, Rat(0));
  integrate[index[dims]] = 1;
  RatVec point(nb, Rat(0));
  point[index[dims]] = 1;

  RatVec todd(nb, Rat(0));
  for (size_t i = 0; i < nb; ++i) {
    Rat c(1);
    for (int f = 0; f < k; ++f) c *= projective_todd(dims[f])[exps[i][f]];
    todd[i] = c;
  }

  std::vector<RatVec> embedding;
  for (int f = 0; f < k; ++f) {
    std::vector<int> e(k, 0);
    e[f] = 1;
    RatVec row(nb, Rat(0));
    row[index[e]] = 1;
    embedding.push_back(std::move(row));
  }

  CatalogEntry entry;
  entry.name = name;
  entry.description = description;
  entry.model = CohomologyModel(name, n, basis, mult, integrate, todd, point,
                                embedding);

  SymTensor form(k, n);
  SymTensor::for_each_sorted_index(k, n, [&](const std::vector<int>& idx) {
    std::vector<int> count(k, 0);
    for (int v : idx) ++count[v];
    if (count == dims) form.set(idx, Rat(1));
  });
  std::vector<RatVec> gens;
  for (int f = 0; f < k; ++f) {
    RatVec g(k, Rat(0));
    g[f] = 1;
    gens.push_back(std::move(g));
  }
  entry.lattice = PolarisedLattice{name, n, k, form, gens};
  return entry;
}

inline CatalogEntry proj_bundle_p2() {
  // P(O + O(1)) over the plane: h = pullback hyperplane, xi = tautological
  // class with xi^2 = h xi, h^3 = 0, and h^2 xi = h xi^2 = xi^3 = 1.
  CatalogEntry entry;
  entry.name = "proj-bundle-p2";
  entry.description =
      "plane bundle P(O + O(1)) over the plane; xi^2 = h*xi";

  std::vector<BasisElement> basis = {
      {"1", 0},    {"h", 1},      {"xi", 1},
      {"h^2", 2},  {"h*xi", 2},   {"h^2*xi", 3},
  };

  const size_t nb = basis.size();
  auto unitv = [&](size_t i) {
    RatVec v(nb, Rat(0));
    v[i] = 1;
    return v;
  };
  std::map<std::pair<int, int>, RatVec> mult;
  for (int j = 0; j < static_cast<int>(nb); ++j) mult[{0, j}] = unitv(j);
  mult[{1, 1}] = unitv(3);  // h . h = h^2
  mult[{1, 2}] = unitv(4);  // h . xi = h xi
  mult[{2, 2}] = unitv(4);  // xi^2 = h xi
  mult[{1, 4}] = unitv(5);  // h . h xi = h^2 xi
  mult[{2, 3}] = unitv(5);  // xi . h^2 = h^2 xi
  mult[{2, 4}] = unitv(5);  // xi . h xi = h xi^2 = h^2 xi
  // h . h^2 = h^3 = 0 and all degree > 3 products vanish (absent entries).

  RatVec integrate = unitv(5);
  RatVec point = unitv(5);
  RatVec todd(nb, Rat(0));
  todd[0] = 1;
  todd[1] = 1;          // h
  todd[2] = 1;          // xi
  todd[3] = Rat(1, 3);  // h^2
  todd[4] = Rat(3, 2);  // h xi
  todd[5] = 1;          // h^2 xi
  std::vector<RatVec> embedding = {unitv(1), unitv(2)};

  entry.model = CohomologyModel(entry.name, 3, basis, mult, integrate, todd,
                                point, embedding);

  SymTensor form(2, 3);
  form.set({0, 0, 1}, Rat(1));  // h^2 xi
  form.set({0, 1, 1}, Rat(1));  // h xi^2
  form.set({1, 1, 1}, Rat(1));  // xi^3
  // h^3 = 0: entry absent.
  // Generators strictly inside the ample cone {a h + b xi : a, b > 0}; the
  // boundary classes h and xi are excluded because the restricted
  // intersection form degenerates there.
  std::vector<RatVec> gens = {{Rat(10), Rat(1)}, {Rat(1), Rat(10)}};
  entry.lattice = PolarisedLattice{entry.name, 3, 2, form, gens};
  return entry;
}

inline std::map<std::string, CatalogEntry> build_catalog() {
  std::map<std::string, CatalogEntry> out;
  auto put = [&](CatalogEntry e) { out[e.name] = std::move(e); };
  put(product_of_projective_spaces("p2", "the projective plane", {2}));
  put(product_of_projective_spaces("p3", "projective three-space", {3}));
  put(product_of_projective_spaces("p1xp1",
                                   "quadric surface (product of two lines)",
                                   {1, 1}));
  put(product_of_projective_spaces("p1xp2", "product of a line and a plane",
                                   {1, 2}));
  put(product_of_projective_spaces("p1cubed", "triple product of lines",
                                   {1, 1, 1}));
  put(proj_bundle_p2());
  return out;
}

}  // namespace detail

inline const std::map<std::string, CatalogEntry>& all() {
  static const std::map<std::string, CatalogEntry> entries =
      detail::build_catalog();
  return entries;
}

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : all()) out.push_back(k);
  return out;
}

inline const CatalogEntry& get(const std::string& name) {
  const auto& entries = all();
  auto it = entries.find(name);
  if (it == entries.end())
    throw Error(ErrorCode::ParseError, "unknown catalog entry '" + name +
                                           "' (available: " + [] {
                                             std::string s;
                                             for (const auto& n : names()) {
                                               if (!s.empty()) s += ", ";
                                               s += n;
                                             }
                                             return s;
                                           }() + ")");
  return it->second;
}

}  // namespace mwall::catalog

#endif  // MWALL_CATALOG_HPP
