#include "hssmv/banded.hpp"

#include <cmath>
#include <string>

#include "hssmv/error.hpp"

namespace hssmv {

SymmetricBandMatrix::SymmetricBandMatrix(Index n, Index half_bandwidth)
    : n_(n), p_(half_bandwidth), band_(DenseMatrix::Zero(n, half_bandwidth + 1)) {
  if (n < 1 || half_bandwidth < 0 || half_bandwidth >= n) {
    fail(ErrorKind::invalid_argument, "band matrix of size " + std::to_string(n) +
                                          " with half-bandwidth " + std::to_string(half_bandwidth));
  }
}

void SymmetricBandMatrix::set(Index i, Index j, double value) {
  if (i < j) std::swap(i, j);
  if (j < 0 || i >= n_ || i - j > p_) fail(ErrorKind::index_out_of_range, "entry outside the band");
  band_(i, p_ - (i - j)) = value;
}

double SymmetricBandMatrix::get(Index i, Index j) const {
  if (i < j) std::swap(i, j);
  if (j < 0 || i >= n_) fail(ErrorKind::index_out_of_range, "entry outside the matrix");
  if (i - j > p_) return 0.0;
  return band_(i, p_ - (i - j));
}

DenseMatrix SymmetricBandMatrix::dense() const {
  DenseMatrix out = DenseMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index j = std::max<Index>(0, i - p_); j <= i; ++j) {
      out(i, j) = out(j, i) = band_(i, p_ - (i - j));
    }
  }
  return out;
}

DenseMatrix SymmetricBandMatrix::multiply(const DenseMatrix& x) const {
  if (x.rows() != n_) fail(ErrorKind::dimension_mismatch, "band multiply");
  DenseMatrix y = DenseMatrix::Zero(n_, x.cols());
  for (Index i = 0; i < n_; ++i) {
    y.row(i) += band_(i, p_) * x.row(i);
    for (Index j = std::max<Index>(0, i - p_); j < i; ++j) {
      const double a = band_(i, p_ - (i - j));
      y.row(i) += a * x.row(j);
      y.row(j) += a * x.row(i);
    }
  }
  return y;
}

BandCholesky::BandCholesky(const SymmetricBandMatrix& m)
    : n_(m.size()), p_(m.half_bandwidth()), factor_(DenseMatrix::Zero(m.size(), m.half_bandwidth() + 1)) {
  auto l = [&](Index i, Index j) -> double& { return factor_(i, p_ - (i - j)); };
  for (Index i = 0; i < n_; ++i) {
    const Index first = std::max<Index>(0, i - p_);
    for (Index j = first; j <= i; ++j) {
      double sum = m.get(i, j);
      for (Index t = std::max(first, j - p_); t < j; ++t) sum -= l(i, t) * l(j, t);
      if (j < i) {
        l(i, j) = sum / l(j, j);
      } else {
        if (!(sum > 0)) {
          fail(ErrorKind::factorization_failed, "non-positive pivot at row " + std::to_string(i));
        }
        l(i, i) = std::sqrt(sum);
      }
    }
  }
}

DenseMatrix BandCholesky::solve(const DenseMatrix& b) const {
  if (b.rows() != n_) fail(ErrorKind::dimension_mismatch, "band solve");
  DenseMatrix x = b;
  for (Index i = 0; i < n_; ++i) {
    for (Index t = std::max<Index>(0, i - p_); t < i; ++t) x.row(i) -= factor_(i, p_ - (i - t)) * x.row(t);
    x.row(i) /= factor_(i, p_);
  }
  for (Index i = n_ - 1; i >= 0; --i) {
    for (Index t = i + 1; t <= std::min(n_ - 1, i + p_); ++t) x.row(i) -= factor_(t, p_ - (t - i)) * x.row(t);
    x.row(i) /= factor_(i, p_);
  }
  return x;
}

}  // namespace hssmv
