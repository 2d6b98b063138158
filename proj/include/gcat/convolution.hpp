#ifndef GCAT_CONVOLUTION_HPP
#define GCAT_CONVOLUTION_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcat/dense.hpp"
#include "gcat/groupoid.hpp"

namespace gcat {

// An element of the convolution *-algebra of a finite groupoid: one complex
// coefficient per arrow.  Elements keep a pointer to their parent groupoid,
// which must outlive them; operations on elements with different parents
// throw.
struct ConvolutionElement {
  const FiniteGroupoid* parent = nullptr;
  Vec coeff;
};

inline ConvolutionElement make_element(const FiniteGroupoid& g) {
  return {&g, Vec::Zero(g.size())};
}

inline ConvolutionElement basis_element(const FiniteGroupoid& g, int arrow) {
  ConvolutionElement f = make_element(g);
  f.coeff(arrow) = 1.0;
  return f;
}

// Two-sided identity: 1/w(u) on each unit, zero elsewhere.  (Left
// invariance forces w(x) = w(unit at source(x)), which makes this exact.)
inline ConvolutionElement unit_element(const FiniteGroupoid& g) {
  ConvolutionElement f = make_element(g);
  for (int u : g.objects) f.coeff(u) = 1.0 / g.weight[u];
  return f;
}

inline ConvolutionElement random_element(const FiniteGroupoid& g,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ConvolutionElement f = make_element(g);
  for (int x = 0; x < g.size(); ++x) f.coeff(x) = cplx(dist(rng), dist(rng));
  return f;
}

// Random element with small Gaussian-integer coefficients: with integer
// Haar weights, convolution then stays exact in double arithmetic.
inline ConvolutionElement random_int_element(const FiniteGroupoid& g,
                                             std::uint64_t seed,
                                             int bound = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-bound, bound);
  ConvolutionElement f = make_element(g);
  for (int x = 0; x < g.size(); ++x)
    f.coeff(x) = cplx(static_cast<double>(dist(rng)),
                      static_cast<double>(dist(rng)));
  return f;
}

namespace detail {

inline void require_same_parent(const ConvolutionElement& f,
                                const ConvolutionElement& g,
                                const char* op) {
  if (f.parent == nullptr || g.parent == nullptr || f.parent != g.parent)
    throw error(std::string(op) + ": elements live on different groupoids");
}

}  // namespace detail

// Convolution product (f*g)(x) = sum over y in the range fiber of source(x)
// of f(xy) g(y^-1) w(y).
inline ConvolutionElement convolve(const ConvolutionElement& f,
                                   const ConvolutionElement& g) {
  detail::require_same_parent(f, g, "convolve");
  const FiniteGroupoid& G = *f.parent;
  ConvolutionElement out = make_element(G);
  for (int x = 0; x < G.size(); ++x) {
    cplx acc = 0.0;
    for (int y : G.range_fiber(G.source[x])) {
      const int xy = G.comp[x][y];
      acc += f.coeff(xy) * g.coeff(G.inverse[y]) * G.weight[y];
    }
    out.coeff(x) = acc;
  }
  return out;
}

// Involution f*(x) = conj(f(x^-1)).
inline ConvolutionElement adjoint(const ConvolutionElement& f) {
  const FiniteGroupoid& G = *f.parent;
  ConvolutionElement out = make_element(G);
  for (int x = 0; x < G.size(); ++x)
    out.coeff(x) = std::conj(f.coeff(G.inverse[x]));
  return out;
}

// I-norm: max over units u of the larger of sum_{x in G^u} |f(x)| w(x) and
// sum_{x in G^u} |f(x^-1)| w(x).
inline double i_norm(const ConvolutionElement& f) {
  const FiniteGroupoid& G = *f.parent;
  double best = 0.0;
  for (int u : G.objects) {
    double s_r = 0.0, s_s = 0.0;
    for (int x : G.range_fiber(u)) {
      s_r += std::abs(f.coeff(x)) * G.weight[x];
      s_s += std::abs(f.coeff(G.inverse[x])) * G.weight[x];
    }
    best = std::max(best, std::max(s_r, s_s));
  }
  return best;
}

// Matrix of the regular representation of f on the source fiber of `u`
// (rows and columns follow source_fiber(u) order).  Entry (a, b) is
// sqrt(d_a) f(x_a x_b^-1) sqrt(d_b) with d_y = w(y^-1); with this weighting
// the map is a *-homomorphism for every left-invariant Haar system.
inline Mat regular_representation(const ConvolutionElement& f, int u) {
  const FiniteGroupoid& G = *f.parent;
  if (u < 0 || u >= G.size() || !G.unit[u])
    throw error("regular_representation: index is not a unit arrow");
  const std::vector<int>& fib = G.source_fiber(u);
  const int m = static_cast<int>(fib.size());
  std::vector<double> rootd(m);
  for (int a = 0; a < m; ++a)
    rootd[a] = std::sqrt(G.weight[G.inverse[fib[a]]]);
  Mat out(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int z = G.comp[fib[a]][G.inverse[fib[b]]];
      out(a, b) = rootd[a] * f.coeff(z) * rootd[b];
    }
  return out;
}

// Reduced norm: the largest operator norm of the regular representation
// over all units.
inline double reduced_norm(const ConvolutionElement& f) {
  const FiniteGroupoid& G = *f.parent;
  double best = 0.0;
  for (int u : G.objects)
    best = std::max(best, op_norm(regular_representation(f, u)));
  return best;
}

// A 2-cocycle: a unimodular value on every composable pair.
struct Cocycle {
  const FiniteGroupoid* parent = nullptr;
  std::unordered_map<std::uint64_t, cplx> val;

  static std::uint64_t key(int x, int y, int n) {
    return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(y);
  }

  cplx operator()(int x, int y) const {
    auto it = val.find(key(x, y, parent->size()));
    if (it == val.end())
      throw error("cocycle: pair is not composable");
    return it->second;
  }
};

inline Cocycle trivial_cocycle(const FiniteGroupoid& g) {
  Cocycle c;
  c.parent = &g;
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (g.comp[x][y] != -1) c.val[Cocycle::key(x, y, g.size())] = 1.0;
  return c;
}

// Coboundary of a unimodular function b on arrows with b = 1 on units:
// sigma(x, y) = b(xy) / (b(x) b(y)).  Always a valid normalized cocycle.
inline Cocycle coboundary_cocycle(const FiniteGroupoid& g,
                                  const std::vector<cplx>& b) {
  if (static_cast<int>(b.size()) != g.size())
    throw error("coboundary_cocycle: phase table size mismatch");
  Cocycle c;
  c.parent = &g;
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y) {
      const int z = g.comp[x][y];
      if (z != -1)
        c.val[Cocycle::key(x, y, g.size())] = b[z] / (b[x] * b[y]);
    }
  return c;
}

inline Cocycle random_cocycle(const FiniteGroupoid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * 3.14159265358979323846);
  std::vector<cplx> b(g.size());
  for (int x = 0; x < g.size(); ++x)
    b[x] = g.unit[x] ? cplx(1.0, 0.0) : std::polar(1.0, dist(rng));
  return coboundary_cocycle(g, b);
}

// Pointwise product of cocycles (the group operation on 2-cocycles).
inline Cocycle multiply_cocycles(const Cocycle& a, const Cocycle& b) {
  if (a.parent != b.parent)
    throw error("multiply_cocycles: cocycles live on different groupoids");
  Cocycle c;
  c.parent = a.parent;
  for (const auto& [k, v] : a.val) c.val[k] = v * b.val.at(k);
  return c;
}

// Verifies the cocycle identity sigma(x,y) sigma(xy,z) = sigma(x,yz)
// sigma(y,z) on composable triples, unimodularity, and normalization on
// units.
inline CheckList check_cocycle(const Cocycle& c, double tol = 1e-12) {
  const FiniteGroupoid& g = *c.parent;
  CheckList out;

  double uni_err = 0.0;
  std::string w_uni;
  for (const auto& [k, v] : c.val) {
    const double err = std::abs(std::abs(v) - 1.0);
    if (err > uni_err) {
      uni_err = err;
      w_uni = "non-unimodular value on a composable pair";
    }
  }
  out.add("cocycle-unimodular", uni_err, tol, w_uni);

  double norm_err = 0.0;
  std::string w_norm;
  for (int x = 0; x < g.size(); ++x) {
    const double e1 = std::abs(c(g.range[x], x) - cplx(1.0));
    const double e2 = std::abs(c(x, g.source[x]) - cplx(1.0));
    const double err = std::max(e1, e2);
    if (err > norm_err) {
      norm_err = err;
      w_norm = "unit pair at arrow " + detail::arrow_ref(g, x);
    }
  }
  out.add("cocycle-unit-normalized", norm_err, tol, w_norm);

  double id_err = 0.0;
  std::string w_id;
  for (int x = 0; x < g.size(); ++x)
    for (int y : g.range_fiber(g.source[x])) {
      const int xy = g.comp[x][y];
      for (int z : g.range_fiber(g.source[y])) {
        const int yz = g.comp[y][z];
        const double err =
            std::abs(c(x, y) * c(xy, z) - c(x, yz) * c(y, z));
        if (err > id_err) {
          id_err = err;
          w_id = "triple (" + detail::arrow_ref(g, x) + ", " +
                 detail::arrow_ref(g, y) + ", " + detail::arrow_ref(g, z) +
                 ")";
        }
      }
    }
  out.add("cocycle-identity", id_err, tol, w_id);

  return out;
}

// Twisted convolution (f*g)(x) = sum_y f(xy) g(y^-1) sigma(xy, y^-1) w(y).
inline ConvolutionElement convolve_twisted(const ConvolutionElement& f,
                                           const ConvolutionElement& g,
                                           const Cocycle& sigma) {
  detail::require_same_parent(f, g, "convolve_twisted");
  if (sigma.parent != f.parent)
    throw error("convolve_twisted: cocycle lives on a different groupoid");
  const FiniteGroupoid& G = *f.parent;
  ConvolutionElement out = make_element(G);
  for (int x = 0; x < G.size(); ++x) {
    cplx acc = 0.0;
    for (int y : G.range_fiber(G.source[x])) {
      const int xy = G.comp[x][y];
      const int yi = G.inverse[y];
      acc += f.coeff(xy) * g.coeff(yi) * sigma(xy, yi) * G.weight[y];
    }
    out.coeff(x) = acc;
  }
  return out;
}

// Twisted involution f*(x) = conj(f(x^-1) sigma(x, x^-1)).
inline ConvolutionElement adjoint_twisted(const ConvolutionElement& f,
                                          const Cocycle& sigma) {
  if (sigma.parent != f.parent)
    throw error("adjoint_twisted: cocycle lives on a different groupoid");
  const FiniteGroupoid& G = *f.parent;
  ConvolutionElement out = make_element(G);
  for (int x = 0; x < G.size(); ++x) {
    const int xi = G.inverse[x];
    out.coeff(x) = std::conj(f.coeff(xi) * sigma(x, xi));
  }
  return out;
}

}  // namespace gcat

#endif  // GCAT_CONVOLUTION_HPP
