#ifndef GCAT_GELFAND_HPP
#define GCAT_GELFAND_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcat/check.hpp"
#include "gcat/dense.hpp"
#include "gcat/groupoid.hpp"
#include "gcat/morphism.hpp"

namespace gcat {

// Commutative side of the correspondence: finite spaces, partially defined
// maps between them, and the pullback homomorphisms of function algebras.
// Points are 0..n-1.  A finite space is discrete, every subset is open, so
// the domain of a partial map is an arbitrary subset.

struct FiniteSpace {
  int n = 0;
  std::string name;
};

// Identity of spaces is their point count; names are labels only.
inline bool same_space(const FiniteSpace& a, const FiniteSpace& b) {
  return a.n == b.n;
}

// A map defined on a subset U of `source` into `target`: image[x] is the
// image point for x in U and -1 outside U.
struct PartialMap {
  FiniteSpace source;
  FiniteSpace target;
  std::vector<int> image;

  bool in_domain(int x) const { return image[x] != -1; }

  // Sorted points of U.
  std::vector<int> domain() const {
    std::vector<int> u;
    for (int x = 0; x < static_cast<int>(image.size()); ++x)
      if (image[x] != -1) u.push_back(x);
    return u;
  }
};

inline PartialMap make_partial_map(FiniteSpace source, FiniteSpace target,
                                   std::vector<int> image) {
  if (static_cast<int>(image.size()) != source.n)
    throw structural_error("make_partial_map: image table has " +
                           std::to_string(image.size()) + " entries for " +
                           std::to_string(source.n) + " source points");
  for (int x = 0; x < source.n; ++x)
    if (image[x] < -1 || image[x] >= target.n)
      throw structural_error("make_partial_map: image of point " +
                             std::to_string(x) + " is " +
                             std::to_string(image[x]) +
                             ", outside the target");
  return {std::move(source), std::move(target), std::move(image)};
}

inline PartialMap identity_partial_map(const FiniteSpace& x) {
  std::vector<int> image(static_cast<size_t>(x.n));
  for (int p = 0; p < x.n; ++p) image[static_cast<size_t>(p)] = p;
  return {x, x, std::move(image)};
}

inline PartialMap empty_partial_map(FiniteSpace source, FiniteSpace target) {
  std::vector<int> image(static_cast<size_t>(source.n), -1);
  return {std::move(source), std::move(target), std::move(image)};
}

// All (|target|+1)^|source| partial maps, the image table running through
// -1..|target|-1 in odometer order with the last point fastest.
inline std::vector<PartialMap> enumerate_partial_maps(
    const FiniteSpace& source, const FiniteSpace& target) {
  double count_estimate = std::pow(static_cast<double>(target.n + 1),
                                   static_cast<double>(source.n));
  if (count_estimate > 8.0e6)
    throw error("enumerate_partial_maps: " + std::to_string(source.n) +
                " -> " + std::to_string(target.n) +
                " has too many maps to enumerate");
  std::vector<PartialMap> out;
  std::vector<int> image(static_cast<size_t>(source.n), -1);
  for (;;) {
    out.push_back({source, target, image});
    int x = source.n - 1;
    while (x >= 0 && image[static_cast<size_t>(x)] == target.n - 1)
      image[static_cast<size_t>(x--)] = -1;
    if (x < 0) break;
    ++image[static_cast<size_t>(x)];
  }
  return out;
}

inline PartialMap random_partial_map(const FiniteSpace& source,
                                     const FiniteSpace& target,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-1, target.n - 1);
  std::vector<int> image(static_cast<size_t>(source.n));
  for (int x = 0; x < source.n; ++x) image[static_cast<size_t>(x)] = pick(rng);
  return {source, target, std::move(image)};
}

// Composite `outer after inner`, defined at the source points whose inner
// image lies in the domain of outer.
inline PartialMap compose_partial_maps(const PartialMap& outer,
                                       const PartialMap& inner) {
  if (!same_space(inner.target, outer.source))
    throw structural_error(
        "compose_partial_maps: space mismatch, inner target has " +
        std::to_string(inner.target.n) + " points, outer source has " +
        std::to_string(outer.source.n));
  std::vector<int> image(static_cast<size_t>(inner.source.n), -1);
  for (int x = 0; x < inner.source.n; ++x) {
    int y = inner.image[static_cast<size_t>(x)];
    if (y != -1) image[static_cast<size_t>(x)] = outer.image[static_cast<size_t>(y)];
  }
  return {inner.source, outer.target, std::move(image)};
}

// The pullback of functions along a partial map, extended by zero off the
// domain: an algebra homomorphism functions(target) -> functions(source)
// sending a delta function to the sum of the deltas at its preimages.  As
// a matrix, h(x, y) = 1 exactly when x is in U with image y, so rows are
// indexed by source points, columns by target points, and every row holds
// at most one 1.
struct CommHom {
  FiniteSpace source;
  FiniteSpace target;
  Mat h;
};

inline CommHom partial_map_to_hom(const PartialMap& m) {
  Mat h = Mat::Zero(m.source.n, m.target.n);
  for (int x = 0; x < m.source.n; ++x)
    if (m.image[static_cast<size_t>(x)] != -1)
      h(x, m.image[static_cast<size_t>(x)]) = 1.0;
  return {m.source, m.target, std::move(h)};
}

// g is a function on the target, one value per point; the result is the
// pulled back function on the source.
inline Vec apply_hom(const CommHom& f, const Vec& g) {
  if (g.size() != f.target.n)
    throw error("apply_hom: function has " + std::to_string(g.size()) +
                " values for " + std::to_string(f.target.n) +
                " target points");
  return f.h * g;
}

// Verifies that the matrix is a *-homomorphism on the delta basis: entries
// are exactly 0 or 1, real, delta products pull back to products of
// pullbacks, and the unit pulls back to an indicator function.
inline CheckList check_comm_hom(const CommHom& f) {
  CheckList out;
  out.add_flag("hom-shape",
               f.h.rows() == f.source.n && f.h.cols() == f.target.n,
               "matrix is " + std::to_string(f.h.rows()) + " x " +
                   std::to_string(f.h.cols()));
  if (!out.all_pass()) return out;

  double real_defect = 0.0;
  double binary_defect = 0.0;
  std::string binary_witness;
  for (int x = 0; x < f.source.n; ++x) {
    for (int y = 0; y < f.target.n; ++y) {
      cplx v = f.h(x, y);
      real_defect = std::max(real_defect, std::abs(v.imag()));
      double d = std::min(std::abs(v), std::abs(v - cplx(1.0)));
      if (d > binary_defect) {
        binary_defect = d;
        binary_witness = "entry (" + std::to_string(x) + ", " +
                         std::to_string(y) + ")";
      }
    }
  }
  out.add("hom-entries-real", real_defect, 0.0);
  out.add("hom-entries-binary", binary_defect, 0.0, binary_witness);

  // psi(delta_y1 delta_y2) against psi(delta_y1) psi(delta_y2) pointwise;
  // the products of the columns are exact in 0/1 arithmetic.
  double mult_defect = 0.0;
  std::string mult_witness;
  for (int y1 = 0; y1 < f.target.n; ++y1) {
    for (int y2 = y1; y2 < f.target.n; ++y2) {
      for (int x = 0; x < f.source.n; ++x) {
        cplx lhs = y1 == y2 ? f.h(x, y1) : cplx(0.0);
        cplx rhs = f.h(x, y1) * f.h(x, y2);
        double d = std::abs(lhs - rhs);
        if (d > mult_defect) {
          mult_defect = d;
          mult_witness = "psi(delta_" + std::to_string(y1) + " delta_" +
                         std::to_string(y2) + ") differs at point " +
                         std::to_string(x);
        }
      }
    }
  }
  out.add("hom-delta-multiplicativity", mult_defect, 0.0, mult_witness);

  // The image of the constant one function must be an indicator function.
  double unit_defect = 0.0;
  for (int x = 0; x < f.source.n; ++x) {
    cplx v = f.h.row(x).sum();
    unit_defect = std::max(
        unit_defect, std::min(std::abs(v), std::abs(v - cplx(1.0))));
  }
  out.add("hom-unit-indicator", unit_defect, 0.0);
  return out;
}

// Recovers the partial map from a pullback hom.  The domain is the support
// of the image of the unit; a row with two 1s is not multiplicative and is
// rejected with the failing product of deltas as witness.
inline PartialMap hom_to_partial_map(const CommHom& f) {
  if (f.h.rows() != f.source.n || f.h.cols() != f.target.n)
    throw structural_error("hom_to_partial_map: matrix is " +
                           std::to_string(f.h.rows()) + " x " +
                           std::to_string(f.h.cols()) + " for spaces of " +
                           std::to_string(f.source.n) + " and " +
                           std::to_string(f.target.n) + " points");
  std::vector<int> image(static_cast<size_t>(f.source.n), -1);
  for (int x = 0; x < f.source.n; ++x) {
    for (int y = 0; y < f.target.n; ++y) {
      cplx v = f.h(x, y);
      if (v == cplx(0.0)) continue;
      if (v != cplx(1.0))
        throw criterion_error("hom_to_partial_map: entry (" +
                              std::to_string(x) + ", " + std::to_string(y) +
                              ") is not 0 or 1");
      if (image[static_cast<size_t>(x)] != -1)
        throw criterion_error(
            "hom_to_partial_map: not multiplicative, delta_" +
            std::to_string(image[static_cast<size_t>(x)]) + " delta_" +
            std::to_string(y) + " = 0 but the product of pullbacks is 1 at "
            "point " + std::to_string(x));
      image[static_cast<size_t>(x)] = y;
    }
  }
  return {f.source, f.target, std::move(image)};
}

// The space viewed as a groupoid of units: n loops with unit Haar weights
// and no other arrows.  Its convolution algebra is functions(space) with
// the pointwise product.
inline FiniteGroupoid unit_groupoid(const FiniteSpace& x) {
  FiniteGroupoid g;
  g.name = x.name.empty() ? "units_" + std::to_string(x.n) : x.name;
  g.arrow_ids.resize(static_cast<size_t>(x.n));
  g.source.resize(static_cast<size_t>(x.n));
  g.range.resize(static_cast<size_t>(x.n));
  g.inverse.resize(static_cast<size_t>(x.n));
  g.unit.assign(static_cast<size_t>(x.n), 1);
  g.weight.assign(static_cast<size_t>(x.n), 1.0);
  g.comp.assign(static_cast<size_t>(x.n),
                std::vector<int>(static_cast<size_t>(x.n), -1));
  for (int p = 0; p < x.n; ++p) {
    g.arrow_ids[static_cast<size_t>(p)] = "p" + std::to_string(p);
    g.source[static_cast<size_t>(p)] = p;
    g.range[static_cast<size_t>(p)] = p;
    g.inverse[static_cast<size_t>(p)] = p;
    g.comp[static_cast<size_t>(p)][static_cast<size_t>(p)] = p;
  }
  g.finalize();
  return g;
}

// The same partial map as a morphism between unit groupoids, so that the
// induced map on convolution algebras can be compared against the matrix
// of the pullback hom.  The groupoids must be unit groupoids of the two
// spaces and must outlive the morphism.
inline PartialMorphism space_morphism(const FiniteGroupoid& source_units,
                                      const FiniteGroupoid& target_units,
                                      const PartialMap& m) {
  if (source_units.size() != m.source.n || target_units.size() != m.target.n)
    throw structural_error(
        "space_morphism: groupoid sizes do not match the spaces");
  return make_partial_morphism(source_units, target_units, m.image);
}

}  // namespace gcat

#endif  // GCAT_GELFAND_HPP
