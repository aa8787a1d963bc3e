#include "hssmv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hssmv/error.hpp"

namespace hssmv {

void require_finite(const DenseMatrix& a, const char* what) {
  if (!a.allFinite()) fail(ErrorKind::non_finite, what);
}

namespace {

void sign_normalize(Eigen::Ref<Vector> col) {
  Index arg = 0;
  double best = -1;
  for (Index r = 0; r < col.size(); ++r) {
    // first index wins among equal magnitudes
    if (std::abs(col(r)) > best) {
      best = std::abs(col(r));
      arg = r;
    }
  }
  if (col(arg) < 0) col = -col;
}

bool lex_greater(const Vector& a, const Vector& b) {
  for (Index r = 0; r < a.size(); ++r) {
    if (a(r) != b(r)) return a(r) > b(r);
  }
  return false;
}

}  // namespace

DenseMatrix truncated_svd_left(const DenseMatrix& b, Index k) {
  require_finite(b, "truncated_svd_left input");
  if (k < 1 || k > std::min(b.rows(), b.cols())) {
    fail(ErrorKind::rank_out_of_range,
         "k = " + std::to_string(k) + " for a " + std::to_string(b.rows()) + "x" +
             std::to_string(b.cols()) + " matrix");
  }
  Eigen::MatrixXd work = b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::MatrixXd u = svd.matrixU();
  for (Index c = 0; c < u.cols(); ++c) sign_normalize(u.col(c));

  // Reorder the cluster of singular values tied with sigma_{k-1}.
  const double tol = 1e-14 * std::max(sigma(0), 1e-300);
  Index lo = k - 1;
  Index hi = k - 1;
  while (lo > 0 && std::abs(sigma(lo - 1) - sigma(k - 1)) <= tol) --lo;
  while (hi + 1 < sigma.size() && std::abs(sigma(hi + 1) - sigma(k - 1)) <= tol) ++hi;
  if (hi > k - 1) {
    std::vector<Vector> cluster;
    for (Index c = lo; c <= hi; ++c) cluster.emplace_back(u.col(c));
    std::stable_sort(cluster.begin(), cluster.end(), lex_greater);
    for (Index c = lo; c <= hi; ++c) u.col(c) = cluster[static_cast<std::size_t>(c - lo)];
  }
  return u.leftCols(k);
}

DenseMatrix nullspace_basis(const DenseMatrix& omega) {
  require_finite(omega, "nullspace_basis input");
  if (omega.rows() >= omega.cols()) {
    fail(ErrorKind::not_wide, "nullspace_basis needs rows < cols, got " +
                                  std::to_string(omega.rows()) + "x" +
                                  std::to_string(omega.cols()));
  }
  Eigen::MatrixXd work = omega;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(omega.cols() - rank);
}

DenseMatrix pivoted_qr_basis(const DenseMatrix& b, Index k) {
  require_finite(b, "pivoted_qr_basis input");
  if (k < 1 || k > std::min(b.rows(), b.cols())) {
    fail(ErrorKind::rank_out_of_range, "pivoted_qr_basis: k = " + std::to_string(k));
  }
  Eigen::MatrixXd work = b;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(work);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), k);
  return q;
}

DenseMatrix right_pinv_apply(const DenseMatrix& y, const DenseMatrix& omega) {
  if (y.cols() != omega.cols()) {
    fail(ErrorKind::dimension_mismatch, "right_pinv_apply: Y has " + std::to_string(y.cols()) +
                                            " columns, Omega has " +
                                            std::to_string(omega.cols()));
  }
  if (omega.rows() > omega.cols()) fail(ErrorKind::not_wide, "right_pinv_apply: Omega is tall");
  Eigen::MatrixXd ot = omega.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ot);
  qr.setThreshold(1e-12);
  if (qr.rank() < omega.rows()) {
    fail(ErrorKind::rank_deficient, "right_pinv_apply: Omega has rank " +
                                        std::to_string(qr.rank()) + " < " +
                                        std::to_string(omega.rows()));
  }
  // Omega^T X = Y^T in the least-squares sense; Y pinv(Omega) = X^T.
  Eigen::MatrixXd yt = y.transpose();
  Eigen::MatrixXd x = qr.solve(yt);
  return x.transpose();
}

DenseMatrix gaussian(Index rows, Index cols, const RngStream& stream) {
  if (rows < 0 || cols < 0) fail(ErrorKind::invalid_argument, "gaussian: negative size");
  std::mt19937_64 gen(stream.key());
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix g(rows, cols);
  double* p = g.data();
  for (Index i = 0; i < rows * cols; ++i) p[i] = normal(gen);
  return g;
}

DenseMatrix random_orthonormal(Index rows, Index cols, const RngStream& stream) {
  if (cols > rows) fail(ErrorKind::invalid_argument, "random_orthonormal: cols > rows");
  Eigen::MatrixXd g = gaussian(rows, cols, stream);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index c = 0; c < cols; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

}  // namespace hssmv
