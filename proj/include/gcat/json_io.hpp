#ifndef GCAT_JSON_IO_HPP
#define GCAT_JSON_IO_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gcat/check.hpp"
#include "gcat/convolution.hpp"
#include "gcat/dense.hpp"
#include "gcat/gelfand.hpp"
#include "gcat/groupoid.hpp"
#include "gcat/interval.hpp"
#include "gcat/morphism.hpp"

namespace gcat {

// Order preserving JSON keeps serialized output stable run to run.
using Json = nlohmann::ordered_json;

// Complex scalars are [re, im] pairs, matrices row-major lists of pairs.
inline Json complex_to_json(const cplx& v) {
  return Json::array({v.real(), v.imag()});
}

inline cplx complex_from_json(const Json& a) {
  if (!a.is_array() || a.size() != 2)
    throw structural_error("complex_from_json: expected a [re, im] pair");
  return {a[0].get<double>(), a[1].get<double>()};
}

inline Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back(complex_to_json(m(i, j)));
  return out;
}

inline Mat mat_from_json(const Json& a, int rows, int cols) {
  if (static_cast<int>(a.size()) != rows * cols)
    throw structural_error("mat_from_json: " + std::to_string(a.size()) +
                           " entries for a " + std::to_string(rows) + " x " +
                           std::to_string(cols) + " matrix");
  Mat m(rows, cols);
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complex_from_json(a[k++]);
  return m;
}

// Groupoids: arrows carry the order, the maps are keyed by arrow id, and
// compose lists every defined composite as an [x, y, xy] triple.
inline Json groupoid_to_json(const FiniteGroupoid& g) {
  Json doc;
  doc["name"] = g.name;
  doc["arrows"] = g.arrow_ids;
  Json objects = Json::array();
  for (int u : g.objects) objects.push_back(g.arrow_ids[u]);
  doc["objects"] = objects;
  Json source = Json::object();
  Json range = Json::object();
  Json inverse = Json::object();
  Json weights = Json::object();
  for (int x = 0; x < g.size(); ++x) {
    source[g.arrow_ids[x]] = g.arrow_ids[g.source[x]];
    range[g.arrow_ids[x]] = g.arrow_ids[g.range[x]];
    inverse[g.arrow_ids[x]] = g.arrow_ids[g.inverse[x]];
    weights[g.arrow_ids[x]] = g.weight[x];
  }
  doc["source"] = source;
  doc["range"] = range;
  Json compose = Json::array();
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (g.comp[x][y] != -1)
        compose.push_back(Json::array({g.arrow_ids[x], g.arrow_ids[y],
                                       g.arrow_ids[g.comp[x][y]]}));
  doc["compose"] = compose;
  doc["inverse"] = inverse;
  doc["weights"] = weights;
  return doc;
}

inline FiniteGroupoid groupoid_from_json(const Json& doc) {
  FiniteGroupoid g;
  g.name = doc.value("name", std::string());
  g.arrow_ids = doc.at("arrows").get<std::vector<std::string>>();
  const int n = static_cast<int>(g.arrow_ids.size());
  std::map<std::string, int> index;
  for (int x = 0; x < n; ++x) {
    if (index.count(g.arrow_ids[x]))
      throw structural_error("groupoid_from_json: duplicate arrow id '" +
                             g.arrow_ids[x] + "'");
    index[g.arrow_ids[x]] = x;
  }
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end())
      throw structural_error("groupoid_from_json: unknown arrow id '" + id +
                             "'");
    return it->second;
  };
  g.source.resize(n);
  g.range.resize(n);
  g.inverse.resize(n);
  g.weight.resize(n);
  for (int x = 0; x < n; ++x) {
    const std::string& id = g.arrow_ids[x];
    g.source[x] = lookup(doc.at("source").at(id).get<std::string>());
    g.range[x] = lookup(doc.at("range").at(id).get<std::string>());
    g.inverse[x] = lookup(doc.at("inverse").at(id).get<std::string>());
    g.weight[x] = doc.at("weights").at(id).get<double>();
  }
  g.unit.assign(n, 0);
  for (const auto& id : doc.at("objects"))
    g.unit[lookup(id.get<std::string>())] = 1;
  g.comp.assign(n, std::vector<int>(n, -1));
  for (const auto& triple : doc.at("compose")) {
    if (!triple.is_array() || triple.size() != 3)
      throw structural_error("groupoid_from_json: compose entries must be "
                             "[x, y, xy] triples");
    g.comp[lookup(triple[0].get<std::string>())]
          [lookup(triple[1].get<std::string>())] =
        lookup(triple[2].get<std::string>());
  }
  g.finalize();
  return g;
}

// Partial morphisms refer to their groupoids by name; deserialization
// receives the live groupoids and cross-checks the names.
inline Json morphism_to_json(const PartialMorphism& m) {
  Json doc;
  doc["domain_id"] = m.domain->name;
  doc["codomain_id"] = m.codomain->name;
  Json k = Json::array();
  Json map = Json::object();
  for (int x : m.dom_arrows) {
    k.push_back(m.domain->arrow_ids[x]);
    map[m.domain->arrow_ids[x]] = m.codomain->arrow_ids[m.map[x]];
  }
  doc["K"] = k;
  doc["map"] = map;
  return doc;
}

inline PartialMorphism morphism_from_json(const Json& doc,
                                          const FiniteGroupoid& domain,
                                          const FiniteGroupoid& codomain) {
  if (doc.at("domain_id").get<std::string>() != domain.name ||
      doc.at("codomain_id").get<std::string>() != codomain.name)
    throw structural_error(
        "morphism_from_json: groupoid names do not match the document");
  std::vector<int> map(domain.size(), -1);
  for (const auto& id : doc.at("K")) {
    int x = domain.index_of(id.get<std::string>());
    map[x] = codomain.index_of(
        doc.at("map").at(id.get<std::string>()).get<std::string>());
  }
  return make_partial_morphism(domain, codomain, std::move(map));
}

// Convolution algebra elements: coefficients aligned with the arrow order.
inline Json element_to_json(const ConvolutionElement& f) {
  Json doc;
  doc["groupoid"] = f.parent->name;
  Json coeff = Json::array();
  for (int x = 0; x < f.parent->size(); ++x)
    coeff.push_back(complex_to_json(f.coeff(x)));
  doc["coefficients"] = coeff;
  return doc;
}

inline ConvolutionElement element_from_json(const Json& doc,
                                            const FiniteGroupoid& g) {
  if (doc.at("groupoid").get<std::string>() != g.name)
    throw structural_error(
        "element_from_json: groupoid name does not match the document");
  const Json& coeff = doc.at("coefficients");
  if (static_cast<int>(coeff.size()) != g.size())
    throw structural_error("element_from_json: " +
                           std::to_string(coeff.size()) +
                           " coefficients for " + std::to_string(g.size()) +
                           " arrows");
  ConvolutionElement f = make_element(g);
  for (int x = 0; x < g.size(); ++x) f.coeff(x) = complex_from_json(coeff[x]);
  return f;
}

// Interval algebra elements: one row-major sample per grid point.
inline Json interval_element_to_json(const IntervalElement& f) {
  Json doc;
  doc["n"] = f.parent->n;
  doc["grid_log2"] = f.parent->grid_log2;
  Json samples = Json::array();
  for (const Mat& m : f.samples) samples.push_back(mat_to_json(m));
  doc["samples"] = samples;
  return doc;
}

inline IntervalElement interval_element_from_json(
    const Json& doc, const ConstrainedIntervalAlgebra& parent) {
  if (doc.at("n").get<int>() != parent.n ||
      doc.at("grid_log2").get<int>() != parent.grid_log2)
    throw structural_error(
        "interval_element_from_json: size or grid does not match the "
        "algebra");
  const Json& samples = doc.at("samples");
  if (static_cast<int>(samples.size()) != parent.points())
    throw structural_error("interval_element_from_json: " +
                           std::to_string(samples.size()) +
                           " samples for " + std::to_string(parent.points()) +
                           " grid points");
  IntervalElement f = make_interval_element(parent);
  for (int k = 0; k < parent.points(); ++k)
    f.samples[k] = mat_from_json(samples[k], parent.n, parent.n);
  return f;
}

inline Json unitary_path_to_json(const UnitaryPath& p) {
  Json doc;
  doc["n"] = p.n;
  doc["grid_log2"] = p.grid_log2;
  Json samples = Json::array();
  for (const Mat& m : p.samples) samples.push_back(mat_to_json(m));
  doc["samples"] = samples;
  return doc;
}

inline UnitaryPath unitary_path_from_json(const Json& doc) {
  UnitaryPath p;
  p.n = doc.at("n").get<int>();
  p.grid_log2 = doc.at("grid_log2").get<int>();
  const Json& samples = doc.at("samples");
  if (static_cast<int>(samples.size()) != p.points())
    throw structural_error("unitary_path_from_json: " +
                           std::to_string(samples.size()) + " samples for " +
                           std::to_string(p.points()) + " grid points");
  for (const auto& s : samples) p.samples.push_back(mat_from_json(s, p.n, p.n));
  return p;
}

// Endpoint constraint specs: block list, padding, and the optional
// conjugator (dense matrix) or permutation (index list).
inline Json subalgebra_spec_to_json(const StandardSubalgebraSpec& s) {
  Json doc;
  Json blocks = Json::array();
  for (auto [a, b] : s.blocks) blocks.push_back(Json::array({a, b}));
  doc["blocks"] = blocks;
  doc["zero_pad"] = s.zero_pad;
  doc["conjugator"] = s.conjugator ? mat_to_json(*s.conjugator) : Json();
  doc["perm"] = s.perm ? Json(*s.perm) : Json();
  return doc;
}

inline StandardSubalgebraSpec subalgebra_spec_from_json(const Json& doc) {
  StandardSubalgebraSpec s;
  for (const auto& block : doc.at("blocks")) {
    if (!block.is_array() || block.size() != 2)
      throw structural_error("subalgebra_spec_from_json: blocks must be "
                             "[multiplicity, size] pairs");
    s.blocks.emplace_back(block[0].get<int>(), block[1].get<int>());
  }
  s.zero_pad = doc.at("zero_pad").get<int>();
  if (!doc.at("conjugator").is_null())
    s.conjugator = mat_from_json(doc.at("conjugator"), s.dim(), s.dim());
  if (!doc.at("perm").is_null())
    s.perm = doc.at("perm").get<std::vector<int>>();
  return s;
}

inline Json interval_algebra_to_json(const ConstrainedIntervalAlgebra& a) {
  Json doc;
  doc["name"] = a.name;
  doc["n"] = a.n;
  doc["grid_log2"] = a.grid_log2;
  doc["membership_tol"] = a.membership_tol;
  Json constraints = Json::array();
  for (const auto& [grid, spec] : a.constraints) {
    Json entry;
    entry["grid"] = grid;
    entry["spec"] = subalgebra_spec_to_json(spec);
    constraints.push_back(entry);
  }
  doc["constraints"] = constraints;
  doc["twist"] = a.twist ? unitary_path_to_json(*a.twist) : Json();
  return doc;
}

inline ConstrainedIntervalAlgebra interval_algebra_from_json(const Json& doc) {
  ConstrainedIntervalAlgebra a;
  a.name = doc.value("name", std::string());
  a.n = doc.at("n").get<int>();
  a.grid_log2 = doc.at("grid_log2").get<int>();
  a.membership_tol = doc.at("membership_tol").get<double>();
  for (const auto& entry : doc.at("constraints"))
    a.constraints[entry.at("grid").get<int>()] =
        subalgebra_spec_from_json(entry.at("spec"));
  if (!doc.at("twist").is_null())
    a.twist = unitary_path_from_json(doc.at("twist"));
  return a;
}

// Finite spaces and partial maps between them; -1 marks undefined points.
inline Json space_to_json(const FiniteSpace& x) {
  Json doc;
  doc["n"] = x.n;
  doc["name"] = x.name;
  return doc;
}

inline FiniteSpace space_from_json(const Json& doc) {
  return {doc.at("n").get<int>(), doc.value("name", std::string())};
}

inline Json partial_map_to_json(const PartialMap& m) {
  Json doc;
  doc["source"] = space_to_json(m.source);
  doc["target"] = space_to_json(m.target);
  doc["image"] = m.image;
  return doc;
}

inline PartialMap partial_map_from_json(const Json& doc) {
  return make_partial_map(space_from_json(doc.at("source")),
                          space_from_json(doc.at("target")),
                          doc.at("image").get<std::vector<int>>());
}

// Check results keep their order; the witness appears only on failure, as
// in the in-memory structure.
inline Json check_list_to_json(const CheckList& cl) {
  Json out = Json::array();
  for (const auto& r : cl.results) {
    Json entry;
    entry["name"] = r.name;
    entry["pass"] = r.pass;
    entry["max_error"] = r.max_error;
    entry["tolerance"] = r.tolerance;
    entry["witness"] = r.witness;
    out.push_back(entry);
  }
  return out;
}

}  // namespace gcat

#endif  // GCAT_JSON_IO_HPP
