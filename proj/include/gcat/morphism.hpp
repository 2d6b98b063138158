#ifndef GCAT_MORPHISM_HPP
#define GCAT_MORPHISM_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcat/convolution.hpp"
#include "gcat/groupoid.hpp"

namespace gcat {

// A partial morphism: a functor from a subgroupoid K of `domain` into
// `codomain` that pushes the Haar weights forward.  `map[x]` is the image
// arrow index for x in K and -1 outside.  The groupoids are not owned and
// must outlive the morphism; identity of groupoids is pointer identity.
struct PartialMorphism {
  const FiniteGroupoid* domain = nullptr;
  const FiniteGroupoid* codomain = nullptr;
  std::vector<int> dom_arrows;  // sorted arrow indices of K
  std::vector<int> map;         // size domain->size(), -1 outside K

  bool in_domain(int x) const { return map[x] != -1; }
};

// Builds a morphism from a full-size map table (-1 marks arrows outside K).
inline PartialMorphism make_partial_morphism(const FiniteGroupoid& domain,
                                             const FiniteGroupoid& codomain,
                                             std::vector<int> map) {
  if (static_cast<int>(map.size()) != domain.size())
    throw error("make_partial_morphism: map table size mismatch");
  PartialMorphism m;
  m.domain = &domain;
  m.codomain = &codomain;
  m.map = std::move(map);
  for (int x = 0; x < domain.size(); ++x) {
    if (m.map[x] < -1 || m.map[x] >= codomain.size())
      throw error("make_partial_morphism: image index out of range");
    if (m.map[x] != -1) m.dom_arrows.push_back(x);
  }
  return m;
}

inline PartialMorphism identity_morphism(const FiniteGroupoid& g) {
  std::vector<int> map(g.size());
  for (int x = 0; x < g.size(); ++x) map[x] = x;
  return make_partial_morphism(g, g, std::move(map));
}

// The morphism G -> (K as a standalone groupoid) that is the identity on K
// and undefined elsewhere.  Its induced map embeds the convolution algebra
// of K into that of G by extension with zero.  `to_parent` maps arrows of
// `sub` to arrows of `g`.
inline PartialMorphism restriction_morphism(const FiniteGroupoid& g,
                                            const FiniteGroupoid& sub,
                                            const std::vector<int>& to_parent) {
  std::vector<int> map(g.size(), -1);
  for (size_t k = 0; k < to_parent.size(); ++k)
    map[to_parent[k]] = static_cast<int>(k);
  return make_partial_morphism(g, sub, std::move(map));
}

inline PartialMorphism restriction_morphism(const FiniteGroupoid& g,
                                            const RestrictResult& sub) {
  return restriction_morphism(g, sub.groupoid, sub.to_parent);
}

// Checks that K is a subgroupoid, that the map is a functor on K, and that
// the domain Haar weights push forward onto the codomain weights fiber by
// fiber.  `weight_tol` 0 keeps integer weights exact.
inline CheckList check_partial_morphism(const PartialMorphism& m,
                                        double weight_tol = 0.0) {
  CheckList out;
  const FiniteGroupoid& G = *m.domain;
  const FiniteGroupoid& H = *m.codomain;

  out.add_flag("domain-subgroupoid", is_subgroupoid(G, m.dom_arrows),
               "domain arrow set is not closed");
  if (!out.all_pass()) return out;

  bool unit_ok = true;
  std::string w_unit;
  for (int x : m.dom_arrows) {
    if (G.unit[x] && !H.unit[m.map[x]]) {
      unit_ok = false;
      w_unit = "unit " + detail::arrow_ref(G, x) + " maps to a non-unit";
      break;
    }
  }
  out.add_flag("functor-units", unit_ok, w_unit);

  bool sr_ok = true;
  std::string w_sr;
  for (int x : m.dom_arrows) {
    if (m.map[G.source[x]] != H.source[m.map[x]] ||
        m.map[G.range[x]] != H.range[m.map[x]]) {
      sr_ok = false;
      w_sr = "source/range not preserved at " + detail::arrow_ref(G, x);
      break;
    }
  }
  out.add_flag("functor-source-range", sr_ok, w_sr);

  bool inv_ok = true;
  std::string w_inv;
  for (int x : m.dom_arrows) {
    if (m.map[G.inverse[x]] != H.inverse[m.map[x]]) {
      inv_ok = false;
      w_inv = "inverse not preserved at " + detail::arrow_ref(G, x);
      break;
    }
  }
  out.add_flag("functor-inverse", inv_ok, w_inv);

  bool comp_ok = true;
  std::string w_comp;
  for (int x : m.dom_arrows) {
    for (int y : m.dom_arrows) {
      const int xy = G.comp[x][y];
      if (xy == -1) continue;
      const int im = H.comp[m.map[x]][m.map[y]];
      if (im == -1 || im != m.map[xy]) {
        comp_ok = false;
        w_comp = "composition not preserved at (" + detail::arrow_ref(G, x) +
                 ", " + detail::arrow_ref(G, y) + ")";
        break;
      }
    }
    if (!comp_ok) break;
  }
  out.add_flag("functor-composition", comp_ok, w_comp);
  if (!out.all_pass()) return out;

  // Pushforward of the fiber weights: for every unit u of K with image v,
  // the masses of the preimages inside K^u must reproduce the codomain
  // weights on all of H^v.
  double push_err = 0.0;
  std::string w_push;
  for (int u : m.dom_arrows) {
    if (!G.unit[u]) continue;
    const int v = m.map[u];
    std::map<int, double> mass;
    for (int x : G.range_fiber(u))
      if (m.in_domain(x)) mass[m.map[x]] += G.weight[x];
    for (int h : H.range_fiber(v)) {
      auto it = mass.find(h);
      const double got = it == mass.end() ? 0.0 : it->second;
      const double err = std::abs(got - H.weight[h]);
      if (err > push_err) {
        push_err = err;
        std::ostringstream os;
        os << "unit " << detail::arrow_ref(G, u) << " -> "
           << detail::arrow_ref(H, v) << ": mass over "
           << detail::arrow_ref(H, h) << " is " << got << ", expected "
           << H.weight[h];
        w_push = os.str();
      }
    }
  }
  out.add("haar-weights-pushforward", push_err, weight_tol, w_push);

  return out;
}

// True when the map restricted to each fiber K^u is a bijection onto the
// codomain fiber over the image unit.
inline bool fiberwise_bijective(const PartialMorphism& m) {
  const FiniteGroupoid& G = *m.domain;
  const FiniteGroupoid& H = *m.codomain;
  for (int u : m.dom_arrows) {
    if (!G.unit[u]) continue;
    const int v = m.map[u];
    std::set<int> seen;
    size_t count = 0;
    for (int x : G.range_fiber(u))
      if (m.in_domain(x)) {
        ++count;
        seen.insert(m.map[x]);
      }
    if (count != seen.size()) return false;
    if (seen.size() != H.range_fiber(v).size()) return false;
  }
  return true;
}

// Composite `outer after inner`: defined on the arrows of inner's domain
// whose image lies in outer's domain.
inline PartialMorphism compose_partial(const PartialMorphism& outer,
                                       const PartialMorphism& inner) {
  if (inner.codomain != outer.domain)
    throw error(
        "compose_partial: inner codomain and outer domain are different "
        "groupoids");
  std::vector<int> map(inner.domain->size(), -1);
  for (int x : inner.dom_arrows) {
    const int mid = inner.map[x];
    if (outer.map[mid] != -1) map[x] = outer.map[mid];
  }
  return make_partial_morphism(*inner.domain, *outer.codomain, std::move(map));
}

// Pullback along the morphism extended by zero: (m^* f)(x) = f(map(x)) on K
// and 0 elsewhere.  For a morphism that passes check_partial_morphism this
// is a *-homomorphism between the convolution algebras, contravariantly.
inline ConvolutionElement induced_map(const PartialMorphism& m,
                                      const ConvolutionElement& f) {
  if (f.parent != m.codomain)
    throw error("induced_map: element does not live on the codomain");
  ConvolutionElement out = make_element(*m.domain);
  for (int x : m.dom_arrows) out.coeff(x) = f.coeff(m.map[x]);
  return out;
}

// Checks contravariance of the induced maps over a composable chain
// [m0: G0 -> G1, m1: G1 -> G2, ...]: pulling a random element of the last
// codomain back through the composite morphism must agree coefficient for
// coefficient with pulling it back stage by stage.
inline CheckList verify_functor_laws(const std::vector<PartialMorphism>& chain,
                                     int samples = 4,
                                     std::uint64_t seed = 0) {
  CheckList out;
  if (chain.empty()) {
    out.add_flag("chain-nonempty", false, "empty morphism chain");
    return out;
  }
  bool chained = true;
  std::string w_chain;
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i].codomain != chain[i + 1].domain) {
      chained = false;
      w_chain = "links " + std::to_string(i) + " and " + std::to_string(i + 1) +
                " do not share a groupoid";
      break;
    }
  }
  out.add_flag("chain-composable", chained, w_chain);
  if (!chained) return out;

  PartialMorphism composite = chain[0];
  for (size_t i = 1; i < chain.size(); ++i)
    composite = compose_partial(chain[i], composite);

  double err = 0.0;
  for (int s = 0; s < samples; ++s) {
    ConvolutionElement f =
        random_int_element(*chain.back().codomain, seed + 1000 * s);
    ConvolutionElement step = f;
    for (size_t i = chain.size(); i-- > 0;)
      step = induced_map(chain[i], step);
    ConvolutionElement direct = induced_map(composite, f);
    err = std::max(err, (step.coeff - direct.coeff).cwiseAbs().maxCoeff());
  }
  out.add("contravariant-factorization", err, 0.0);
  return out;
}

}  // namespace gcat

#endif  // GCAT_MORPHISM_HPP
