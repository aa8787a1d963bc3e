#pragma once

#include <cstdint>
#include <memory>

#include "hssmv/banded.hpp"
#include "hssmv/oracle.hpp"
#include "hssmv/structures.hpp"

namespace hssmv {

/// N = 2^(L+1) matrix of 2x2 blocks: [[0, 1+delta], [1, 0]] on the block
/// anti-diagonal, identity everywhere else.
DenseMatrix hard_instance(int levels, double delta);

/// The reference approximation 1/2 * ones for the hard instance.
DenseMatrix hard_instance_reference(int levels);

/// Inverse of a random symmetric banded matrix, applied through a banded
/// Cholesky factorization. `bandwidth` counts all diagonals (odd); the
/// half-bandwidth is (bandwidth - 1) / 2.
class BandedInverseOracle final : public MatvecOracle {
 public:
  BandedInverseOracle(Index n, Index bandwidth, std::uint64_t seed);

  Index dim() const override { return matrix_.size(); }
  DenseMatrix apply(const DenseMatrix& x) const override { return chol_.solve(x); }
  DenseMatrix apply_transpose(const DenseMatrix& x) const override { return chol_.solve(x); }
  bool thread_safe() const override { return true; }

  const SymmetricBandMatrix& banded() const { return matrix_; }

 private:
  SymmetricBandMatrix matrix_;
  BandCholesky chol_;
};

std::unique_ptr<BandedInverseOracle> banded_inverse_oracle(Index n, Index bandwidth,
                                                           std::uint64_t seed);

/// Schur complement onto the middle column of an N_g x 51 grid-graph
/// Laplacian, eliminating the 25-column subgrids on either side.
class GridSchurOracle final : public MatvecOracle {
 public:
  static constexpr Index kGridCols = 51;
  static constexpr Index kHalfCols = 25;

  explicit GridSchurOracle(Index rows);

  Index dim() const override { return rows_; }
  DenseMatrix apply(const DenseMatrix& x) const override;
  DenseMatrix apply_transpose(const DenseMatrix& x) const override { return apply(x); }
  bool thread_safe() const override { return true; }

 private:
  Index rows_;
  std::unique_ptr<BandCholesky> left_;
  std::unique_ptr<BandCholesky> right_;
};

std::unique_ptr<GridSchurOracle> grid_schur_oracle(Index rows);

/// Nystrom discretization of 1/2 sigma - 1/(2 pi) int n(x).(x-y)/|x-y|^2 sigma
/// on the star r(theta) = 1 + a cos(w theta) with the trapezoid rule.
DenseMatrix bie_star_matrix(Index nodes, double amplitude, int arms);

/// ||A - B||_F / ||A||_F; throws zero_norm for A = 0.
double frobenius_error(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_error(const DenseMatrix& a, const TelescopingFactorization& t);

/// Dense reconstruction of a random HSS(L, k) matrix.
DenseMatrix random_hss_matrix(int levels, Index rank, std::uint64_t seed);

}  // namespace hssmv
