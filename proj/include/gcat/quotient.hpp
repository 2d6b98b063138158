#ifndef GCAT_QUOTIENT_HPP
#define GCAT_QUOTIENT_HPP

#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcat/groupoid.hpp"
#include "gcat/morphism.hpp"

namespace gcat {

// Result of quotienting a groupoid by an arrow partition.  The quotient
// groupoid is held by shared_ptr so the embedded quotient morphism's
// codomain pointer stays valid across copies and moves.
struct QuotientResult {
  std::shared_ptr<const FiniteGroupoid> groupoid;
  PartialMorphism map;  // everywhere-defined morphism onto the quotient
  CheckList report;     // validation of the quotient, incl. left invariance
};

// Union-find partition of the arrows generated by a list of merges.
// Returns class labels 0..C-1 in order of first appearance.
inline std::vector<int> partition_from_merges(
    const FiniteGroupoid& g, const std::vector<std::pair<int, int>>& merges) {
  std::vector<int> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (auto [a, b] : merges) parent[find(a)] = find(b);
  std::vector<int> label(g.size(), -1);
  int next = 0;
  for (int x = 0; x < g.size(); ++x) {
    const int r = find(x);
    if (label[r] == -1) label[r] = next++;
    label[x] = label[r];
  }
  return label;
}

// Quotient by an arrow partition.
//
// The partition must be a congruence: inverses, sources and ranges must be
// constant on classes, and for every pair of classes whose source and range
// classes match, the composites of composable representatives must exist
// and fall into a single class.  Violations throw structural_error naming
// a witness.
//
// The Haar system must push forward: for every unit class, all member
// units must assign the same total mass to every arrow class in their
// fiber.  Disagreement throws criterion_error with a witness.
//
// The returned report contains the full validation of the quotient with
// the pushed-forward weights.  With the identity partition the
// construction always succeeds and the report's left-invariance entry
// reproduces exactly the left invariance of the input system.
inline QuotientResult quotient_by_criterion(const FiniteGroupoid& g,
                                            const std::vector<int>& class_of,
                                            double weight_tol = 0.0) {
  const int n = g.size();
  if (static_cast<int>(class_of.size()) != n)
    throw error("quotient_by_criterion: partition size mismatch");
  int nc = 0;
  for (int x = 0; x < n; ++x) {
    if (class_of[x] < 0)
      throw error("quotient_by_criterion: negative class label");
    nc = std::max(nc, class_of[x] + 1);
  }
  std::vector<std::vector<int>> members(nc);
  for (int x = 0; x < n; ++x) members[class_of[x]].push_back(x);
  for (const auto& c : members)
    if (c.empty())
      throw error("quotient_by_criterion: class labels are not contiguous");

  auto class_ref = [&](int c) {
    return "[" + g.arrow_ids[members[c].front()] + "]";
  };

  // Inverse, source and range must be constant on classes.
  std::vector<int> q_inv(nc), q_src(nc), q_rng(nc);
  for (int c = 0; c < nc; ++c) {
    q_inv[c] = class_of[g.inverse[members[c][0]]];
    q_src[c] = class_of[g.source[members[c][0]]];
    q_rng[c] = class_of[g.range[members[c][0]]];
    for (int x : members[c]) {
      if (class_of[g.inverse[x]] != q_inv[c])
        throw structural_error(
            "quotient: inverse is not constant on class " + class_ref(c) +
            " (arrow " + detail::arrow_ref(g, x) + ")");
      if (class_of[g.source[x]] != q_src[c] ||
          class_of[g.range[x]] != q_rng[c])
        throw structural_error(
            "quotient: source/range is not constant on class " +
            class_ref(c) + " (arrow " + detail::arrow_ref(g, x) + ")");
    }
  }

  // Composition must be single valued and total on matching class pairs.
  std::vector<std::vector<int>> q_comp(nc, std::vector<int>(nc, -1));
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) {
      if (q_src[a] != q_rng[b]) continue;
      int result = -1;
      for (int x : members[a])
        for (int y : members[b]) {
          const int xy = g.comp[x][y];
          if (xy == -1) continue;
          if (result == -1) {
            result = class_of[xy];
          } else if (class_of[xy] != result) {
            throw structural_error(
                "quotient: composition of classes " + class_ref(a) + " and " +
                class_ref(b) + " is not single valued (arrows " +
                detail::arrow_ref(g, x) + ", " + detail::arrow_ref(g, y) +
                ")");
          }
        }
      if (result == -1)
        throw structural_error("quotient: classes " + class_ref(a) + " and " +
                               class_ref(b) +
                               " should compose but have no composable "
                               "representatives");
      q_comp[a][b] = result;
    }

  // Unit classes are the classes of units.
  std::vector<char> q_unit(nc, 0);
  for (int u : g.objects) q_unit[class_of[u]] = 1;

  // Pushforward weights: every unit of a unit class must induce the same
  // mass distribution on the classes in its fiber.
  std::vector<double> q_weight(nc, 0.0);
  std::vector<char> weight_set(nc, 0);
  for (int c = 0; c < nc; ++c) {
    if (!q_unit[c]) continue;
    for (int v : members[c]) {
      if (!g.unit[v]) continue;
      std::map<int, double> mass;
      for (int x : g.range_fiber(v)) mass[class_of[x]] += g.weight[x];
      // Every class with range class c must receive mass from this unit.
      for (int a = 0; a < nc; ++a) {
        if (q_rng[a] != c) continue;
        auto it = mass.find(a);
        const double got = it == mass.end() ? 0.0 : it->second;
        if (!weight_set[a]) {
          if (got <= 0.0) {
            std::ostringstream os;
            os << "quotient: unit " << detail::arrow_ref(g, v)
               << " gives class " << class_ref(a) << " zero mass";
            throw criterion_error(os.str());
          }
          q_weight[a] = got;
          weight_set[a] = 1;
        } else if (std::abs(got - q_weight[a]) > weight_tol) {
          std::ostringstream os;
          os << "quotient: class " << class_ref(a) << " gets mass " << got
             << " from unit " << detail::arrow_ref(g, v) << " but "
             << q_weight[a] << " from an earlier unit of "
             << class_ref(c);
          throw criterion_error(os.str());
        }
      }
    }
  }

  auto h = std::make_shared<FiniteGroupoid>();
  h->name = g.name + "/~";
  h->arrow_ids.resize(nc);
  for (int c = 0; c < nc; ++c) h->arrow_ids[c] = class_ref(c);
  h->source = q_src;
  h->range = q_rng;
  h->inverse = q_inv;
  h->unit = q_unit;
  h->weight = q_weight;
  h->comp = q_comp;
  h->finalize();

  QuotientResult out;
  out.groupoid = h;
  out.map = make_partial_morphism(g, *h, class_of);
  out.report = validate_groupoid(*h, weight_tol);
  out.report.append(check_partial_morphism(out.map, weight_tol),
                    "quotient-map:");
  return out;
}

}  // namespace gcat

#endif  // GCAT_QUOTIENT_HPP
