#ifndef GCAT_DENSE_HPP
#define GCAT_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace gcat {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Operator norm (largest singular value).  Large inputs go through the
// Hermitian eigenproblem of a* a rather than BDCSVD, whose deflation step
// in Eigen 3.4.0 indexes out of bounds on heavily degenerate spectra.
inline double op_norm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() >= 64 || a.cols() >= 64) {
    const Mat gram = a.cols() <= a.rows() ? Mat(a.adjoint() * a)
                                          : Mat(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

inline double max_abs(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Kronecker product a (x) b: index (i*rb + k, j*cb + l) = a(i,j) b(k,l).
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Permutation matrix P with P e_j = e_{perm[j]}.
inline Mat perm_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Mat p = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) p(perm[j], j) = 1.0;
  return p;
}

// Flip permutation for C^m (x) C^n -> C^n (x) C^m: index i*n+j maps to
// j*m+i, so perm_matrix(flip) conjugates A (x) B into B (x) A.
inline std::vector<int> flip_perm(int m, int n) {
  std::vector<int> perm(static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) perm[i * n + j] = j * m + i;
  return perm;
}

// Max deviation of U from unitarity, max |(U* U - I)_{ij}|.
inline double unitary_defect(const Mat& u) {
  if (u.rows() != u.cols()) return 1.0;
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return max_abs(d);
}

// Deterministic complex matrix with entries uniform in [-1,1] + i[-1,1].
inline Mat random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = cplx(dist(rng), dist(rng));
  return out;
}

// Deterministic matrix with small Gaussian-integer entries.  Sums and
// products of such matrices stay integer-valued, so algebraic identities
// hold bit for bit in double arithmetic.
inline Mat random_int_matrix(int rows, int cols, std::uint64_t seed,
                             int bound = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-bound, bound);
  Mat out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out(i, j) = cplx(static_cast<double>(dist(rng)),
                       static_cast<double>(dist(rng)));
  return out;
}

// Haar-ish random unitary via QR of a random complex matrix.
inline Mat random_unitary(int n, std::uint64_t seed) {
  Mat a = random_matrix(n, n, seed);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  // Fix the phase of each column so the result is deterministic across
  // Eigen versions: make the diagonal of R positive real.
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx d = r(j, j);
    double m = std::abs(d);
    if (m > 0) q.col(j) *= d / m;
  }
  return q;
}

}  // namespace gcat

#endif  // GCAT_DENSE_HPP
