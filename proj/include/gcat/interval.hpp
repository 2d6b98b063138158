#pragma once

// Sampled models of C([0,1], M_n) and constrained subalgebras: matrix-valued
// functions on a dyadic grid with standard-subalgebra boundary conditions and
// an optional unitary-path twist.  Elements are piecewise linear between grid
// samples; products, adjoints and norms are computed per sample.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcat/check.hpp"
#include "gcat/dense.hpp"

namespace gcat {

// u (⊕_i 1_{a_i} ⊗ M_{b_i} ⊕ 0_m) u*.  blocks = (multiplicity a_i, size b_i);
// the zero pad occupies the last m coordinates of the unconjugated form.
// The conjugator is either a general unitary (dense) or a permutation stored
// as an index vector (perm, with u e_j = e_{perm[j]}); permutations keep the
// expectation exact and scale to large dimensions.  At most one may be set.
struct StandardSubalgebraSpec {
  std::vector<std::pair<int, int>> blocks;
  int zero_pad = 0;
  std::optional<Mat> conjugator;
  std::optional<std::vector<int>> perm;

  int dim() const {
    int n = zero_pad;
    for (auto [a, b] : blocks) n += a * b;
    return n;
  }
};

inline StandardSubalgebraSpec full_matrix_spec(int n) {
  StandardSubalgebraSpec s;
  s.blocks = {{1, n}};
  return s;
}

inline StandardSubalgebraSpec scalar_spec(int n) {
  StandardSubalgebraSpec s;
  s.blocks = {{n, 1}};
  return s;
}

inline CheckList check_spec(const StandardSubalgebraSpec& s, int n,
                            double tol = 1e-10) {
  CheckList out;
  bool positive = s.zero_pad >= 0;
  for (auto [a, b] : s.blocks) positive = positive && a >= 1 && b >= 1;
  out.add_flag("spec-blocks-positive", positive);
  out.add_flag("spec-dimension", s.dim() == n,
               "block dims sum to " + std::to_string(s.dim()) + ", need " +
                   std::to_string(n));
  out.add_flag("spec-single-conjugator", !(s.conjugator && s.perm));
  if (s.conjugator) {
    bool shape = s.conjugator->rows() == n && s.conjugator->cols() == n;
    out.add_flag("spec-conjugator-shape", shape);
    if (shape)
      out.add("spec-conjugator-unitary", unitary_defect(*s.conjugator), tol);
  }
  if (s.perm) {
    bool valid = int(s.perm->size()) == n;
    std::vector<char> seen(n, 0);
    for (int v : *s.perm) {
      if (v < 0 || v >= n || seen[v]) {
        valid = false;
        break;
      }
      seen[v] = 1;
    }
    out.add_flag("spec-conjugator-permutation", valid);
  }
  return out;
}

// Hilbert-Schmidt orthogonal projection onto the subalgebra: off-pattern
// entries zeroed, the a_i diagonal repeats of each block averaged, pad zeroed.
inline Mat conditional_expectation(const Mat& M,
                                   const StandardSubalgebraSpec& spec) {
  const int n = spec.dim();
  if (M.rows() != n || M.cols() != n)
    throw structural_error("conditional_expectation: matrix is " +
                           std::to_string(M.rows()) + "x" +
                           std::to_string(M.cols()) + ", spec dimension " +
                           std::to_string(n));
  // Conjugation by a permutation is a pure reindexing: (u* M u)(i,j) =
  // M(perm[i], perm[j]).
  Mat X;
  if (spec.perm) {
    const std::vector<int>& w = *spec.perm;
    X.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) X(i, j) = M(w[i], w[j]);
  } else if (spec.conjugator) {
    X = spec.conjugator->adjoint() * M * *spec.conjugator;
  } else {
    X = M;
  }
  Mat out = Mat::Zero(n, n);
  int offset = 0;
  for (auto [a, b] : spec.blocks) {
    Mat avg = Mat::Zero(b, b);
    for (int c = 0; c < a; ++c) avg += X.block(offset + c * b, offset + c * b, b, b);
    avg /= double(a);
    for (int c = 0; c < a; ++c)
      out.block(offset + c * b, offset + c * b, b, b) = avg;
    offset += a * b;
  }
  if (spec.perm) {
    const std::vector<int>& w = *spec.perm;
    Mat back(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) back(w[i], w[j]) = out(i, j);
    return back;
  }
  if (spec.conjugator) return spec.conjugator.value() * out * spec.conjugator->adjoint();
  return out;
}

inline double membership_distance(const Mat& M,
                                  const StandardSubalgebraSpec& spec) {
  return op_norm(M - conditional_expectation(M, spec));
}

// E(identity): the unit of the subalgebra (identity away from the zero pad).
inline Mat spec_unit(const StandardSubalgebraSpec& spec) {
  return conditional_expectation(Mat::Identity(spec.dim(), spec.dim()), spec);
}

inline StandardSubalgebraSpec conjugated_spec(const StandardSubalgebraSpec& s,
                                              const Mat& w) {
  StandardSubalgebraSpec out = s;
  if (s.perm) {
    out.conjugator = Mat(w * perm_matrix(*s.perm));
    out.perm.reset();
  } else {
    out.conjugator = s.conjugator ? Mat(w * *s.conjugator) : w;
  }
  return out;
}

// t -> n x n unitary, sampled on the same dyadic grid as the elements.
struct UnitaryPath {
  int n = 0;
  int grid_log2 = 0;
  std::vector<Mat> samples;

  int points() const { return (1 << grid_log2) + 1; }
};

inline UnitaryPath constant_unitary_path(const Mat& u, int grid_log2) {
  UnitaryPath p;
  p.n = int(u.rows());
  p.grid_log2 = grid_log2;
  p.samples.assign((1 << grid_log2) + 1, u);
  return p;
}

inline UnitaryPath adjoint_path(const UnitaryPath& u) {
  UnitaryPath out = u;
  for (auto& s : out.samples) s = Mat(s.adjoint());
  return out;
}

inline CheckList check_unitary_path(const UnitaryPath& p,
                                    double unitary_tol = 1e-10,
                                    double step_bound = 0.5) {
  CheckList out;
  out.add_flag("path-sample-count", int(p.samples.size()) == p.points());
  double defect = 0, step = 0;
  for (size_t k = 0; k < p.samples.size(); ++k) {
    defect = std::max(defect, unitary_defect(p.samples[k]));
    if (k > 0) step = std::max(step, op_norm(p.samples[k] - p.samples[k - 1]));
  }
  out.add("path-samples-unitary", defect, unitary_tol);
  out.add("path-step-bound", step, step_bound);
  return out;
}

// Descriptor of a subalgebra of C([0,1], M_n): dyadic grid with N = 2^s
// intervals, standard-subalgebra constraints at finitely many grid points,
// optional twist.  With a twist w, membership at a constrained point x means
// w_x* f(x) w_x lies in the spec there.
struct ConstrainedIntervalAlgebra {
  int n = 0;
  int grid_log2 = 8;
  std::map<int, StandardSubalgebraSpec> constraints;
  std::optional<UnitaryPath> twist;
  double membership_tol = 1e-9;
  std::string name;

  int points() const { return (1 << grid_log2) + 1; }
};

inline ConstrainedIntervalAlgebra make_interval_algebra(int n, int grid_log2) {
  if (n < 1) throw structural_error("make_interval_algebra: n must be >= 1");
  if (grid_log2 < 1)
    throw structural_error("make_interval_algebra: grid_log2 must be >= 1");
  ConstrainedIntervalAlgebra A;
  A.n = n;
  A.grid_log2 = grid_log2;
  A.name = "C([0,1],M_" + std::to_string(n) + ")";
  return A;
}

inline StandardSubalgebraSpec effective_constraint(
    const ConstrainedIntervalAlgebra& A, int grid_idx) {
  const StandardSubalgebraSpec& raw = A.constraints.at(grid_idx);
  if (!A.twist) return raw;
  return conjugated_spec(raw, A.twist->samples.at(grid_idx));
}

inline CheckList validate_interval_algebra(const ConstrainedIntervalAlgebra& A) {
  CheckList out;
  out.add_flag("algebra-size", A.n >= 1 && A.grid_log2 >= 1);
  bool on_grid = true;
  for (auto& [idx, spec] : A.constraints) {
    on_grid = on_grid && idx >= 0 && idx <= (1 << A.grid_log2);
    out.append(check_spec(spec, A.n), "constraint-" + std::to_string(idx) + ":");
  }
  out.add_flag("constraints-on-grid", on_grid);
  if (A.twist) {
    out.add_flag("twist-shape",
                 A.twist->n == A.n && A.twist->grid_log2 == A.grid_log2);
    out.append(check_unitary_path(*A.twist), "twist:");
  }
  return out;
}

// Grid-sampled element; between grid points the element is the linear
// interpolant of its samples.
struct IntervalElement {
  const ConstrainedIntervalAlgebra* parent = nullptr;
  std::vector<Mat> samples;

  int n() const { return parent->n; }
};

inline IntervalElement make_interval_element(const ConstrainedIntervalAlgebra& A) {
  IntervalElement f;
  f.parent = &A;
  f.samples.assign(A.points(), Mat::Zero(A.n, A.n));
  return f;
}

inline IntervalElement interval_identity(const ConstrainedIntervalAlgebra& A) {
  IntervalElement f;
  f.parent = &A;
  f.samples.assign(A.points(), Mat::Identity(A.n, A.n));
  return f;
}

inline IntervalElement random_interval_element(const ConstrainedIntervalAlgebra& A,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  IntervalElement f;
  f.parent = &A;
  f.samples.reserve(A.points());
  for (int k = 0; k < A.points(); ++k) {
    Mat s(A.n, A.n);
    for (int i = 0; i < A.n; ++i)
      for (int j = 0; j < A.n; ++j) s(i, j) = cplx(dist(rng), dist(rng));
    f.samples.push_back(std::move(s));
  }
  return f;
}

// Random element satisfying every constraint: constrained samples are
// projected onto their subalgebras by the conditional expectation.
inline IntervalElement random_member(const ConstrainedIntervalAlgebra& A,
                                     std::uint64_t seed) {
  IntervalElement f = random_interval_element(A, seed);
  for (auto& [idx, spec] : A.constraints)
    f.samples[idx] = conditional_expectation(f.samples[idx],
                                             effective_constraint(A, idx));
  return f;
}

// Piecewise-linear evaluation; exact at dyadic points of the grid.
inline Mat evaluate(const IntervalElement& f, double t) {
  if (t < 0.0 || t > 1.0)
    throw structural_error("evaluate: t outside [0,1]");
  const int N = 1 << f.parent->grid_log2;
  double pos = t * N;
  int k = int(std::floor(pos));
  if (k >= N) return f.samples[N];
  double frac = pos - k;
  if (frac == 0.0) return f.samples[k];
  return Mat((1.0 - frac) * f.samples[k] + frac * f.samples[k + 1]);
}

namespace detail {
inline void require_same_parent(const IntervalElement& f,
                                const IntervalElement& g, const char* who) {
  if (f.parent != g.parent)
    throw structural_error(std::string(who) + ": elements of different algebras");
}
}  // namespace detail

inline IntervalElement multiply(const IntervalElement& f,
                                const IntervalElement& g) {
  detail::require_same_parent(f, g, "multiply");
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (size_t k = 0; k < f.samples.size(); ++k)
    out.samples.push_back(f.samples[k] * g.samples[k]);
  return out;
}

inline IntervalElement adjoint(const IntervalElement& f) {
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (auto& s : f.samples) out.samples.push_back(s.adjoint());
  return out;
}

inline IntervalElement add(const IntervalElement& f, const IntervalElement& g) {
  detail::require_same_parent(f, g, "add");
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (size_t k = 0; k < f.samples.size(); ++k)
    out.samples.push_back(f.samples[k] + g.samples[k]);
  return out;
}

inline IntervalElement subtract(const IntervalElement& f,
                                const IntervalElement& g) {
  detail::require_same_parent(f, g, "subtract");
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (size_t k = 0; k < f.samples.size(); ++k)
    out.samples.push_back(f.samples[k] - g.samples[k]);
  return out;
}

inline IntervalElement scale(cplx c, const IntervalElement& f) {
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (auto& s : f.samples) out.samples.push_back(c * s);
  return out;
}

inline double sup_norm(const IntervalElement& f) {
  double m = 0;
  for (auto& s : f.samples) m = std::max(m, op_norm(s));
  return m;
}

// Membership report: one entry per constrained grid point.
inline CheckList check_element(const IntervalElement& f) {
  const ConstrainedIntervalAlgebra& A = *f.parent;
  CheckList out;
  bool shape = int(f.samples.size()) == A.points();
  for (auto& s : f.samples) shape = shape && s.rows() == A.n && s.cols() == A.n;
  out.add_flag("element-sample-count", shape);
  for (auto& [idx, spec] : A.constraints) {
    double d = membership_distance(f.samples.at(idx), effective_constraint(A, idx));
    out.add("membership-at-" + std::to_string(idx), d, A.membership_tol);
  }
  return out;
}

// f(t) -> u_t* f(t) u_t.  Carries a member of the algebra twisted by u onto a
// member of the untwisted algebra (and conversely with the adjoint path).
inline IntervalElement twist_conjugate(const IntervalElement& f,
                                       const UnitaryPath& u) {
  if (u.n != f.parent->n || u.grid_log2 != f.parent->grid_log2)
    throw structural_error("twist_conjugate: path size or grid mismatch");
  IntervalElement out;
  out.parent = f.parent;
  out.samples.reserve(f.samples.size());
  for (size_t k = 0; k < f.samples.size(); ++k)
    out.samples.push_back(u.samples[k].adjoint() * f.samples[k] * u.samples[k]);
  return out;
}

// The same descriptor with the twist folded into the constraint conjugators.
inline ConstrainedIntervalAlgebra untwisted_form(
    const ConstrainedIntervalAlgebra& A) {
  ConstrainedIntervalAlgebra out = A;
  if (!A.twist) return out;
  for (auto& [idx, spec] : out.constraints) spec = effective_constraint(A, idx);
  out.twist.reset();
  return out;
}

// Inclusion of the more constrained algebra into the less constrained one.
// Every coarse constraint must be refined by the fine algebra at that point:
// E_coarse fixes the image of E_fine on the matrix-unit basis.  Returns f
// reinterpreted as an element of coarse.
inline IntervalElement subalgebra_inclusion(const ConstrainedIntervalAlgebra& fine,
                                            const ConstrainedIntervalAlgebra& coarse,
                                            const IntervalElement& f,
                                            double tol = 1e-10) {
  if (f.parent != &fine)
    throw structural_error("subalgebra_inclusion: element not in fine algebra");
  if (fine.n != coarse.n || fine.grid_log2 != coarse.grid_log2)
    throw structural_error("subalgebra_inclusion: size or grid mismatch");
  const int n = fine.n;
  for (auto& [idx, coarse_raw] : coarse.constraints) {
    StandardSubalgebraSpec A = effective_constraint(coarse, idx);
    StandardSubalgebraSpec B = fine.constraints.count(idx)
                                   ? effective_constraint(fine, idx)
                                   : full_matrix_spec(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        Mat e = Mat::Zero(n, n);
        e(p, q) = 1.0;
        Mat eb = conditional_expectation(e, B);
        double defect = op_norm(conditional_expectation(eb, A) - eb);
        if (defect > tol)
          throw criterion_error(
              "subalgebra_inclusion: constraint at grid point " +
              std::to_string(idx) + " does not refine the coarse one, basis (" +
              std::to_string(p) + "," + std::to_string(q) + ") moves by " +
              std::to_string(defect));
      }
  }
  IntervalElement out;
  out.parent = &coarse;
  out.samples = f.samples;
  return out;
}

// f(0) in M_m ⊗ 1_n, f(1) in 1_m ⊗ M_n inside C([0,1], M_{mn}).  The t = 0
// subalgebra is stored as n copies of M_m conjugated by the Kronecker flip.
inline ConstrainedIntervalAlgebra make_dimension_drop(int m, int n,
                                                      int grid_log2 = 8) {
  if (m < 1 || n < 1)
    throw structural_error("make_dimension_drop: sizes must be >= 1");
  ConstrainedIntervalAlgebra A = make_interval_algebra(m * n, grid_log2);
  A.name = "Z_{" + std::to_string(m) + "," + std::to_string(n) + "}";
  StandardSubalgebraSpec at0;
  at0.blocks = {{n, m}};
  at0.perm = flip_perm(n, m);
  StandardSubalgebraSpec at1;
  at1.blocks = {{m, n}};
  A.constraints[0] = at0;
  A.constraints[1 << grid_log2] = at1;
  return A;
}

// f(0) = λ·identity inside C([0,1], M_n).
inline ConstrainedIntervalAlgebra make_zn(int n, int grid_log2 = 8) {
  ConstrainedIntervalAlgebra A = make_interval_algebra(n, grid_log2);
  A.name = "Z_" + std::to_string(n);
  A.constraints[0] = scalar_spec(n);
  return A;
}

// Razak building block A(n, n'): f(0) = diag(c, ..., c, 0_n) with
// a = n'/n - 1 copies of c in M_n, f(1) = diag(c', ..., c') with n'/n copies.
inline ConstrainedIntervalAlgebra make_building_block(int n, int n_prime,
                                                      int grid_log2 = 8) {
  if (n < 1 || n_prime % n != 0)
    throw structural_error("make_building_block: n must divide n'");
  int a = n_prime / n - 1;
  if (a <= 0)
    throw structural_error("make_building_block: need n'/n - 1 > 0");
  ConstrainedIntervalAlgebra A = make_interval_algebra(n_prime, grid_log2);
  A.name = "A(" + std::to_string(n) + "," + std::to_string(n_prime) + ")";
  StandardSubalgebraSpec at0;
  at0.blocks = {{a, n}};
  at0.zero_pad = n;
  StandardSubalgebraSpec at1;
  at1.blocks = {{a + 1, n}};
  A.constraints[0] = at0;
  A.constraints[1 << grid_log2] = at1;
  return A;
}

}  // namespace gcat
