#ifndef GCAT_GROUPOID_HPP
#define GCAT_GROUPOID_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcat/check.hpp"

namespace gcat {

// A finite groupoid with a fixed Haar system.
//
// Arrows are indexed 0..size()-1 and carry string ids for serialization.
// Objects are identified with their unit arrows, so `source[x]` and
// `range[x]` are indices of unit arrows.  Composition is partial data:
// comp[x][y] is the index of the composite (defined exactly when
// source[x] == range[y], arrows composing right to left) or -1.
//
// `weight[x]` is the mass the Haar system gives the singleton {x} inside
// the fiber over range(x).  A Haar system must be positive and left
// invariant (w(xy) == w(y) whenever xy is defined); `validate_groupoid`
// checks this together with the groupoid axioms.
//
// Instances are plain data: operations never mutate their inputs.  After
// filling the primary fields call `finalize()`, which builds the derived
// tables and checks basic shape.
struct FiniteGroupoid {
  std::string name;
  std::vector<std::string> arrow_ids;
  std::vector<int> source;
  std::vector<int> range;
  std::vector<int> inverse;
  std::vector<char> unit;
  std::vector<double> weight;
  std::vector<std::vector<int>> comp;

  // Derived by finalize().
  std::vector<int> objects;
  std::vector<std::vector<int>> fiber_r;
  std::vector<std::vector<int>> fiber_s;
  std::unordered_map<std::string, int> id_index;

  int size() const { return static_cast<int>(arrow_ids.size()); }

  bool composable(int x, int y) const { return source[x] == range[y]; }

  // Composite index or -1 when undefined.
  int compose(int x, int y) const { return comp[x][y]; }

  int index_of(const std::string& id) const {
    auto it = id_index.find(id);
    if (it == id_index.end())
      throw error("groupoid '" + name + "': unknown arrow id '" + id + "'");
    return it->second;
  }

  // Arrows x with range(x) == u.  `u` must be a unit index.
  const std::vector<int>& range_fiber(int u) const { return fiber_r.at(u); }
  const std::vector<int>& source_fiber(int u) const { return fiber_s.at(u); }

  void finalize() {
    const int n = size();
    auto expect = [&](bool ok, const std::string& what) {
      if (!ok)
        throw structural_error("groupoid '" + name + "': " + what);
    };
    expect(static_cast<int>(source.size()) == n, "source table size mismatch");
    expect(static_cast<int>(range.size()) == n, "range table size mismatch");
    expect(static_cast<int>(inverse.size()) == n,
           "inverse table size mismatch");
    expect(static_cast<int>(unit.size()) == n, "unit table size mismatch");
    expect(static_cast<int>(weight.size()) == n, "weight table size mismatch");
    expect(static_cast<int>(comp.size()) == n, "composition table size mismatch");
    for (int x = 0; x < n; ++x) {
      expect(static_cast<int>(comp[x].size()) == n,
             "composition table row size mismatch");
      expect(source[x] >= 0 && source[x] < n, "source index out of range");
      expect(range[x] >= 0 && range[x] < n, "range index out of range");
      expect(inverse[x] >= 0 && inverse[x] < n, "inverse index out of range");
      for (int y = 0; y < n; ++y)
        expect(comp[x][y] >= -1 && comp[x][y] < n,
               "composite index out of range");
    }
    id_index.clear();
    for (int x = 0; x < n; ++x) {
      auto ins = id_index.emplace(arrow_ids[x], x);
      expect(ins.second, "duplicate arrow id '" + arrow_ids[x] + "'");
    }
    objects.clear();
    fiber_r.assign(n, {});
    fiber_s.assign(n, {});
    for (int x = 0; x < n; ++x)
      if (unit[x]) objects.push_back(x);
    for (int x = 0; x < n; ++x) {
      if (range[x] >= 0 && range[x] < n) fiber_r[range[x]].push_back(x);
      if (source[x] >= 0 && source[x] < n) fiber_s[source[x]].push_back(x);
    }
  }
};

namespace detail {

inline std::string arrow_ref(const FiniteGroupoid& g, int x) {
  return "'" + g.arrow_ids[x] + "'";
}

}  // namespace detail

// Checks the groupoid axioms and the Haar system.  Structural checks are
// exact; the left-invariance comparison uses `weight_tol` (0 keeps integer
// weights exact, a small tolerance suits weights produced by arithmetic).
inline CheckList validate_groupoid(const FiniteGroupoid& g,
                                   double weight_tol = 0.0) {
  CheckList out;
  const int n = g.size();

  bool units_ok = true;
  std::string w_units;
  for (int u = 0; u < n && units_ok; ++u) {
    if (g.unit[u] && (g.source[u] != u || g.range[u] != u)) {
      units_ok = false;
      w_units = "unit " + detail::arrow_ref(g, u) + " is not a loop";
    }
  }
  out.add_flag("units-are-loops", units_ok, w_units);

  bool sr_ok = true;
  std::string w_sr;
  for (int x = 0; x < n && sr_ok; ++x) {
    if (!g.unit[g.source[x]] || !g.unit[g.range[x]]) {
      sr_ok = false;
      w_sr = "arrow " + detail::arrow_ref(g, x) +
             " has non-unit source or range";
    }
  }
  out.add_flag("source-range-are-units", sr_ok, w_sr);

  bool dom_ok = true;
  std::string w_dom;
  for (int x = 0; x < n && dom_ok; ++x) {
    for (int y = 0; y < n; ++y) {
      const bool defined = g.comp[x][y] != -1;
      if (defined != g.composable(x, y)) {
        dom_ok = false;
        w_dom = "pair (" + detail::arrow_ref(g, x) + ", " +
                detail::arrow_ref(g, y) + ") " +
                (defined ? "composes but is not composable"
                         : "is composable but has no composite");
        break;
      }
    }
  }
  out.add_flag("composition-domain", dom_ok, w_dom);

  bool csr_ok = true;
  std::string w_csr;
  for (int x = 0; x < n && csr_ok; ++x) {
    for (int y = 0; y < n; ++y) {
      const int z = g.comp[x][y];
      if (z == -1) continue;
      if (g.source[z] != g.source[y] || g.range[z] != g.range[x]) {
        csr_ok = false;
        w_csr = "composite " + detail::arrow_ref(g, z) +
                " has wrong source or range";
        break;
      }
    }
  }
  out.add_flag("composition-source-range", csr_ok, w_csr);

  bool neutral_ok = true;
  std::string w_neutral;
  for (int x = 0; x < n && neutral_ok; ++x) {
    if (g.comp[g.range[x]][x] != x || g.comp[x][g.source[x]] != x) {
      neutral_ok = false;
      w_neutral = "units are not neutral for " + detail::arrow_ref(g, x);
    }
  }
  out.add_flag("unit-laws", neutral_ok, w_neutral);

  bool inv_ok = true;
  std::string w_inv;
  for (int x = 0; x < n && inv_ok; ++x) {
    const int xi = g.inverse[x];
    if (g.inverse[xi] != x || g.source[xi] != g.range[x] ||
        g.range[xi] != g.source[x]) {
      inv_ok = false;
      w_inv = "inverse of " + detail::arrow_ref(g, x) + " is inconsistent";
    } else if (g.comp[x][xi] != g.range[x] || g.comp[xi][x] != g.source[x]) {
      inv_ok = false;
      w_inv = "inverse laws fail for " + detail::arrow_ref(g, x);
    }
  }
  out.add_flag("inverse-laws", inv_ok, w_inv);

  bool assoc_ok = true;
  std::string w_assoc;
  for (int x = 0; x < n && assoc_ok; ++x) {
    for (int y : g.fiber_r[g.source[x]]) {
      const int xy = g.comp[x][y];
      if (xy == -1) continue;
      for (int z : g.fiber_r[g.source[y]]) {
        const int yz = g.comp[y][z];
        if (yz == -1 || g.comp[xy][z] == -1 || g.comp[x][yz] == -1 ||
            g.comp[xy][z] != g.comp[x][yz]) {
          assoc_ok = false;
          w_assoc = "associativity fails at (" + detail::arrow_ref(g, x) +
                    ", " + detail::arrow_ref(g, y) + ", " +
                    detail::arrow_ref(g, z) + ")";
          break;
        }
      }
      if (!assoc_ok) break;
    }
  }
  out.add_flag("associativity", assoc_ok, w_assoc);

  bool pos_ok = true;
  std::string w_pos;
  for (int x = 0; x < n && pos_ok; ++x) {
    if (!(g.weight[x] > 0.0)) {
      pos_ok = false;
      w_pos = "weight of " + detail::arrow_ref(g, x) + " is not positive";
    }
  }
  out.add_flag("haar-positive", pos_ok, w_pos);

  double li_err = 0.0;
  std::string w_li;
  for (int x = 0; x < n; ++x) {
    for (int y : g.fiber_r[g.source[x]]) {
      const int xy = g.comp[x][y];
      if (xy == -1) continue;
      const double err = std::abs(g.weight[xy] - g.weight[y]);
      if (err > li_err) {
        li_err = err;
        std::ostringstream os;
        os << "w(xy) != w(y) at x=" << detail::arrow_ref(g, x)
           << " y=" << detail::arrow_ref(g, y)
           << " xy=" << detail::arrow_ref(g, xy) << " (" << g.weight[xy]
           << " vs " << g.weight[y] << ")";
        w_li = os.str();
      }
    }
  }
  out.add("haar-left-invariant", li_err, weight_tol, w_li);

  return out;
}

// True when the Haar system is the counting system.
inline bool is_etale(const FiniteGroupoid& g) {
  return std::all_of(g.weight.begin(), g.weight.end(),
                     [](double w) { return w == 1.0; });
}

// True when (range, source) determines the arrow, i.e. the groupoid is an
// equivalence relation on its objects.
inline bool is_principal(const FiniteGroupoid& g) {
  std::set<std::pair<int, int>> seen;
  for (int x = 0; x < g.size(); ++x)
    if (!seen.insert({g.range[x], g.source[x]}).second) return false;
  return true;
}

// Direct product: arrows are pairs, everything acts componentwise, and the
// weight of a pair is the product of the factor weights.
inline FiniteGroupoid product_groupoid(const FiniteGroupoid& a,
                                       const FiniteGroupoid& b) {
  const int na = a.size(), nb = b.size();
  FiniteGroupoid g;
  g.name = "(" + a.name + ")x(" + b.name + ")";
  const int n = na * nb;
  g.arrow_ids.reserve(n);
  g.source.resize(n);
  g.range.resize(n);
  g.inverse.resize(n);
  g.unit.resize(n);
  g.weight.resize(n);
  auto idx = [nb](int x, int y) { return x * nb + y; };
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) {
      const int i = idx(x, y);
      g.arrow_ids.push_back("(" + a.arrow_ids[x] + "," + b.arrow_ids[y] + ")");
      g.source[i] = idx(a.source[x], b.source[y]);
      g.range[i] = idx(a.range[x], b.range[y]);
      g.inverse[i] = idx(a.inverse[x], b.inverse[y]);
      g.unit[i] = a.unit[x] && b.unit[y];
      g.weight[i] = a.weight[x] * b.weight[y];
    }
  }
  g.comp.assign(n, std::vector<int>(n, -1));
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2)
        for (int y2 = 0; y2 < nb; ++y2) {
          const int c1 = a.comp[x1][x2];
          if (c1 == -1) continue;
          const int c2 = b.comp[y1][y2];
          if (c2 == -1) continue;
          g.comp[idx(x1, y1)][idx(x2, y2)] = idx(c1, c2);
        }
  g.finalize();
  return g;
}

// Disjoint union: arrows of `a` then arrows of `b`, ids prefixed with the
// copy index so they stay unique.
inline FiniteGroupoid disjoint_union(const FiniteGroupoid& a,
                                     const FiniteGroupoid& b) {
  const int na = a.size(), nb = b.size();
  FiniteGroupoid g;
  g.name = "(" + a.name + ")+(" + b.name + ")";
  const int n = na + nb;
  g.arrow_ids.reserve(n);
  for (int x = 0; x < na; ++x) g.arrow_ids.push_back("0:" + a.arrow_ids[x]);
  for (int y = 0; y < nb; ++y) g.arrow_ids.push_back("1:" + b.arrow_ids[y]);
  g.source.resize(n);
  g.range.resize(n);
  g.inverse.resize(n);
  g.unit.resize(n);
  g.weight.resize(n);
  for (int x = 0; x < na; ++x) {
    g.source[x] = a.source[x];
    g.range[x] = a.range[x];
    g.inverse[x] = a.inverse[x];
    g.unit[x] = a.unit[x];
    g.weight[x] = a.weight[x];
  }
  for (int y = 0; y < nb; ++y) {
    g.source[na + y] = na + b.source[y];
    g.range[na + y] = na + b.range[y];
    g.inverse[na + y] = na + b.inverse[y];
    g.unit[na + y] = b.unit[y];
    g.weight[na + y] = b.weight[y];
  }
  g.comp.assign(n, std::vector<int>(n, -1));
  for (int x1 = 0; x1 < na; ++x1)
    for (int x2 = 0; x2 < na; ++x2)
      if (a.comp[x1][x2] != -1) g.comp[x1][x2] = a.comp[x1][x2];
  for (int y1 = 0; y1 < nb; ++y1)
    for (int y2 = 0; y2 < nb; ++y2)
      if (b.comp[y1][y2] != -1) g.comp[na + y1][na + y2] = na + b.comp[y1][y2];
  g.finalize();
  return g;
}

// Smallest arrow set containing `seed` that is closed under inverse and
// composition (and therefore contains the relevant units).
inline std::vector<int> subgroupoid_closure(const FiniteGroupoid& g,
                                            const std::vector<int>& seed) {
  std::set<int> s(seed.begin(), seed.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(s.begin(), s.end());
    for (int x : cur)
      if (s.insert(g.inverse[x]).second) grew = true;
    cur.assign(s.begin(), s.end());
    for (int x : cur)
      for (int y : cur) {
        const int z = g.comp[x][y];
        if (z != -1 && s.insert(z).second) grew = true;
      }
  }
  return {s.begin(), s.end()};
}

// True when `arrows` (sorted or not) is closed under inverse and
// composition in g.
inline bool is_subgroupoid(const FiniteGroupoid& g,
                           const std::vector<int>& arrows) {
  std::set<int> s(arrows.begin(), arrows.end());
  for (int x : s) {
    if (!s.count(g.inverse[x])) return false;
    for (int y : s) {
      const int z = g.comp[x][y];
      if (z != -1 && !s.count(z)) return false;
    }
  }
  return true;
}

struct RestrictResult {
  FiniteGroupoid groupoid;
  std::vector<int> to_parent;  // new arrow index -> parent arrow index
};

// The subgroupoid on `arrows` as a standalone groupoid with the restricted
// Haar weights.  Throws structural_error when the set is not closed.
inline RestrictResult restrict_to(const FiniteGroupoid& g,
                                  std::vector<int> arrows) {
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  if (!is_subgroupoid(g, arrows))
    throw structural_error("groupoid '" + g.name +
                           "': arrow set is not closed under inverse and "
                           "composition");
  std::vector<int> to_new(g.size(), -1);
  for (size_t i = 0; i < arrows.size(); ++i) to_new[arrows[i]] = static_cast<int>(i);
  FiniteGroupoid h;
  h.name = g.name + "|sub";
  const int m = static_cast<int>(arrows.size());
  h.comp.assign(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i) {
    const int x = arrows[i];
    h.arrow_ids.push_back(g.arrow_ids[x]);
    h.source.push_back(to_new[g.source[x]]);
    h.range.push_back(to_new[g.range[x]]);
    h.inverse.push_back(to_new[g.inverse[x]]);
    h.unit.push_back(g.unit[x]);
    h.weight.push_back(g.weight[x]);
    for (int j = 0; j < m; ++j) {
      const int z = g.comp[x][arrows[j]];
      if (z != -1) h.comp[i][j] = to_new[z];
    }
  }
  h.finalize();
  return {std::move(h), std::move(arrows)};
}

}  // namespace gcat

#endif  // GCAT_GROUPOID_HPP
