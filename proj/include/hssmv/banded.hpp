#pragma once

#include "hssmv/dense.hpp"

namespace hssmv {

/// Symmetric positive definite matrix with half-bandwidth p, stored as its
/// lower band: entry (i, j), i - p <= j <= i, lives at band(i, p - (i - j)).
class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix(Index n, Index half_bandwidth);

  Index size() const { return n_; }
  Index half_bandwidth() const { return p_; }

  /// Sets (i, j) and (j, i); |i - j| <= p.
  void set(Index i, Index j, double value);
  double get(Index i, Index j) const;

  DenseMatrix dense() const;
  DenseMatrix multiply(const DenseMatrix& x) const;

  const DenseMatrix& band() const { return band_; }

 private:
  Index n_;
  Index p_;
  DenseMatrix band_;
};

/// Banded Cholesky M = L L^T; solves cost O(n p) per right-hand side.
class BandCholesky {
 public:
  /// Throws factorization_failed if a pivot is not positive.
  explicit BandCholesky(const SymmetricBandMatrix& m);

  Index size() const { return n_; }
  /// Solves M X = B column by column.
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  Index n_;
  Index p_;
  DenseMatrix factor_;  // lower band of L, same layout as SymmetricBandMatrix
};

}  // namespace hssmv
