#ifndef GCAT_MATRIX_MODEL_HPP
#define GCAT_MATRIX_MODEL_HPP

#include <string>
#include <vector>

#include "gcat/convolution.hpp"
#include "gcat/dense.hpp"
#include "gcat/groupoid.hpp"

namespace gcat {

// Coordinates identifying each arrow of a groupoid with a matrix unit of a
// direct sum of matrix algebras: arrow x corresponds to the elementary
// matrix e_{row[x], col[x]} in block number block[x].  For the pair
// groupoids built by the factories (counting weights) this identification
// turns convolution into block-wise matrix multiplication and the
// involution into the conjugate transpose.
struct MatrixModel {
  std::vector<int> block_sizes;
  std::vector<int> block;
  std::vector<int> row;
  std::vector<int> col;

  int total_dim() const {
    int t = 0;
    for (int s : block_sizes) t += s;
    return t;
  }
};

namespace detail {

inline void require_model_shape(const FiniteGroupoid& g,
                                const MatrixModel& m) {
  const size_t n = static_cast<size_t>(g.size());
  if (m.block.size() != n || m.row.size() != n || m.col.size() != n)
    throw error("matrix model does not match groupoid '" + g.name + "'");
}

}  // namespace detail

// Writes the coefficients of f into block matrices.
inline std::vector<Mat> to_matrices(const FiniteGroupoid& g,
                                    const MatrixModel& m,
                                    const ConvolutionElement& f) {
  if (f.parent != &g)
    throw error("to_matrices: element lives on a different groupoid");
  detail::require_model_shape(g, m);
  std::vector<Mat> out;
  out.reserve(m.block_sizes.size());
  for (int s : m.block_sizes) out.push_back(Mat::Zero(s, s));
  for (int x = 0; x < g.size(); ++x)
    out[m.block[x]](m.row[x], m.col[x]) = f.coeff(x);
  return out;
}

// Reads block matrices back into an element.
inline ConvolutionElement from_matrices(const FiniteGroupoid& g,
                                        const MatrixModel& m,
                                        const std::vector<Mat>& mats) {
  detail::require_model_shape(g, m);
  if (mats.size() != m.block_sizes.size())
    throw error("from_matrices: block count mismatch");
  ConvolutionElement f = make_element(g);
  for (int x = 0; x < g.size(); ++x)
    f.coeff(x) = mats[m.block[x]](m.row[x], m.col[x]);
  return f;
}

// Block-diagonal assembly of a direct sum.
inline Mat block_diag(const std::vector<Mat>& mats) {
  int total = 0;
  for (const Mat& b : mats) total += static_cast<int>(b.rows());
  Mat out = Mat::Zero(total, total);
  int off = 0;
  for (const Mat& b : mats) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += static_cast<int>(b.rows());
  }
  return out;
}

inline double op_norm_blocks(const std::vector<Mat>& mats) {
  double best = 0.0;
  for (const Mat& b : mats) best = std::max(best, op_norm(b));
  return best;
}

inline double max_abs_blocks(const std::vector<Mat>& mats) {
  double best = 0.0;
  for (const Mat& b : mats) best = std::max(best, max_abs(b));
  return best;
}

// Model of a product of two single-block groupoids under the standard
// isomorphism M_m (x) M_n = M_{mn}: arrow (x, y) sits at row
// row(x) * n + row(y), column col(x) * n + col(y).  Arrow order must be the
// product order used by product_groupoid (index x * size_b + y).
inline MatrixModel product_model(const MatrixModel& a, const MatrixModel& b) {
  if (a.block_sizes.size() != 1 || b.block_sizes.size() != 1)
    throw error("product_model: factors must be single-block models");
  const int nb = b.block_sizes[0];
  MatrixModel m;
  m.block_sizes = {a.block_sizes[0] * nb};
  const size_t total = a.block.size() * b.block.size();
  m.block.assign(total, 0);
  m.row.resize(total);
  m.col.resize(total);
  for (size_t x = 0; x < a.block.size(); ++x)
    for (size_t y = 0; y < b.block.size(); ++y) {
      const size_t i = x * b.block.size() + y;
      m.row[i] = a.row[x] * nb + b.row[y];
      m.col[i] = a.col[x] * nb + b.col[y];
    }
  return m;
}

// Model of a disjoint union: blocks of `a` then blocks of `b`, arrow order
// matching disjoint_union.
inline MatrixModel union_model(const MatrixModel& a, const MatrixModel& b) {
  MatrixModel m;
  m.block_sizes = a.block_sizes;
  m.block_sizes.insert(m.block_sizes.end(), b.block_sizes.begin(),
                       b.block_sizes.end());
  const int shift = static_cast<int>(a.block_sizes.size());
  m.block = a.block;
  m.row = a.row;
  m.col = a.col;
  for (size_t y = 0; y < b.block.size(); ++y) {
    m.block.push_back(b.block[y] + shift);
    m.row.push_back(b.row[y]);
    m.col.push_back(b.col[y]);
  }
  return m;
}

}  // namespace gcat

#endif  // GCAT_MATRIX_MODEL_HPP
