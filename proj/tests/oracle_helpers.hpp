#ifndef GCAT_TESTS_ORACLE_HELPERS_HPP
#define GCAT_TESTS_ORACLE_HELPERS_HPP

// Test-side oracles.  These rebuild expected values from first principles
// (arrow id strings, plain Eigen calls, brute-force searches) without going
// through the library's own models or algorithms, so that a library bug
// cannot cancel out of both sides of an assertion.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "gcat/convolution.hpp"
#include "gcat/groupoid.hpp"

namespace gcat_test {

struct ParsedArrow {
  int block = 0;
  int i = 0;  // 1-based row label from the id
  int j = 0;
};

// Parses "(i,j)" and "b<k>:(i,j)" arrow ids.
inline bool parse_pair_id(const std::string& id, ParsedArrow* out) {
  if (std::sscanf(id.c_str(), "b%d:(%d,%d)", &out->block, &out->i, &out->j) ==
      3)
    return true;
  out->block = 0;
  return std::sscanf(id.c_str(), "(%d,%d)", &out->i, &out->j) == 2;
}

// Builds block matrices for an element of a pair-groupoid union purely from
// the arrow ids, inferring block count and sizes from the labels.
inline std::vector<Eigen::MatrixXcd> oracle_mats(
    const gcat::FiniteGroupoid& g, const gcat::ConvolutionElement& f) {
  std::map<int, int> block_size;
  std::vector<ParsedArrow> parsed(g.size());
  for (int x = 0; x < g.size(); ++x) {
    if (!parse_pair_id(g.arrow_ids[x], &parsed[x]))
      throw std::runtime_error("oracle_mats: unparsable id " + g.arrow_ids[x]);
    int& s = block_size[parsed[x].block];
    s = std::max(s, std::max(parsed[x].i, parsed[x].j));
  }
  std::vector<Eigen::MatrixXcd> mats;
  std::map<int, int> block_pos;
  for (const auto& [b, s] : block_size) {
    block_pos[b] = static_cast<int>(mats.size());
    mats.push_back(Eigen::MatrixXcd::Zero(s, s));
  }
  for (int x = 0; x < g.size(); ++x)
    mats[block_pos[parsed[x].block]](parsed[x].i - 1, parsed[x].j - 1) =
        f.coeff(x);
  return mats;
}

inline double oracle_max_abs_diff(const std::vector<Eigen::MatrixXcd>& a,
                                  const std::vector<Eigen::MatrixXcd>& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.size(); ++k)
    m = std::max(m, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return m;
}

// I-norm of a counting-weight pair groupoid element: the larger of the
// largest absolute row sum and largest absolute column sum over all blocks.
inline double oracle_row_col_norm(const std::vector<Eigen::MatrixXcd>& mats) {
  double best = 0.0;
  for (const auto& m : mats) {
    for (int r = 0; r < m.rows(); ++r)
      best = std::max(best, m.row(r).cwiseAbs().sum());
    for (int c = 0; c < m.cols(); ++c)
      best = std::max(best, m.col(c).cwiseAbs().sum());
  }
  return best;
}

inline double oracle_op_norm(const std::vector<Eigen::MatrixXcd>& mats) {
  double best = 0.0;
  for (const auto& m : mats) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

// The group Z/2 as a one-object groupoid: arrows "e" (unit) and "g".
inline gcat::FiniteGroupoid make_z2_group() {
  gcat::FiniteGroupoid g;
  g.name = "z2";
  g.arrow_ids = {"e", "g"};
  g.source = {0, 0};
  g.range = {0, 0};
  g.inverse = {0, 1};
  g.unit = {1, 0};
  g.weight = {1.0, 1.0};
  g.comp = {{0, 1}, {1, 0}};
  g.finalize();
  return g;
}

// The sign cocycle on Z/2: -1 on (g, g), +1 elsewhere.
inline gcat::Cocycle make_z2_sign_cocycle(const gcat::FiniteGroupoid& z2) {
  gcat::Cocycle c = gcat::trivial_cocycle(z2);
  c.val[gcat::Cocycle::key(1, 1, z2.size())] = -1.0;
  return c;
}

inline bool oracle_is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long long oracle_gcd(long long a, long long b) {
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace gcat_test

#endif  // GCAT_TESTS_ORACLE_HELPERS_HPP
