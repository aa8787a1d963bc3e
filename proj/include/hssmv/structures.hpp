#pragma once

#include <vector>

#include "hssmv/dense.hpp"
#include "hssmv/parallel.hpp"

namespace hssmv {

/// Orthonormality tolerance (max-norm of B^T B - I) for basis blocks.
inline constexpr double kOrthonormalTol = 1e-12;

/// The level-l partition of a 2^(l+1)k square matrix into 2^l x 2^l blocks of
/// size 2k.
struct BlockPartition {
  int level = 0;
  Index rank = 1;

  BlockPartition(int level, Index rank);

  Index block_count() const { return Index{1} << level; }
  Index block_size() const { return 2 * rank; }
  Index dim() const { return block_count() * block_size(); }
};

/// HSS block row r_i(A): block row i with the diagonal block removed.
/// `i` is zero-based.
DenseMatrix hss_block_row(const DenseMatrix& a, const BlockPartition& part, Index i);

/// HSS block column c_i(A): block column i with the diagonal block removed.
DenseMatrix hss_block_col(const DenseMatrix& a, const BlockPartition& part, Index i);

/// Same slicing for an arbitrary uniform partition of `a` into
/// `block_count` blocks per side.
DenseMatrix off_diagonal_block_row(const DenseMatrix& a, Index block_count, Index i);
DenseMatrix off_diagonal_block_col(const DenseMatrix& a, Index block_count, Index i);

/// blockdiag(B_1, ..., B_n) with equally shaped blocks.
class BlockDiagonal {
 public:
  BlockDiagonal() = default;
  explicit BlockDiagonal(std::vector<DenseMatrix> blocks);

  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  Index block_rows() const { return blocks_.empty() ? 0 : blocks_.front().rows(); }
  Index block_cols() const { return blocks_.empty() ? 0 : blocks_.front().cols(); }
  Index rows() const { return block_count() * block_rows(); }
  Index cols() const { return block_count() * block_cols(); }

  const DenseMatrix& block(Index i) const { return blocks_[static_cast<std::size_t>(i)]; }
  const std::vector<DenseMatrix>& blocks() const { return blocks_; }

  /// blockdiag * x
  DenseMatrix apply(const DenseMatrix& x, ExecPolicy exec = ExecPolicy::serial) const;
  /// blockdiag^T * x
  DenseMatrix apply_transpose(const DenseMatrix& x, ExecPolicy exec = ExecPolicy::serial) const;
  /// x * blockdiag
  DenseMatrix right_apply(const DenseMatrix& x) const;
  /// x * blockdiag^T
  DenseMatrix right_apply_transpose(const DenseMatrix& x) const;

  DenseMatrix dense() const;

 private:
  std::vector<DenseMatrix> blocks_;
};

/// Block-diagonal matrix whose 2k x k blocks have orthonormal columns.
class BlockDiagonalBasis : public BlockDiagonal {
 public:
  BlockDiagonalBasis() = default;
  /// Throws invalid_factor if any block fails U^T U = I to kOrthonormalTol.
  explicit BlockDiagonalBasis(std::vector<DenseMatrix> blocks);

  double orthonormality_defect() const;
};

/// Block-diagonal matrix with square blocks.
class BlockDiagonalDense : public BlockDiagonal {
 public:
  BlockDiagonalDense() = default;
  explicit BlockDiagonalDense(std::vector<DenseMatrix> blocks);
};

/// The factors produced at one level of the telescoping recursion
/// B^(l+1) = U^(l) B^(l) V^(l)^T + D^(l).
struct LevelFactors {
  BlockDiagonalBasis u;
  BlockDiagonalBasis v;
  BlockDiagonalDense d;
};

/// HSS(L, k) matrix stored as its telescoping factorization.
class TelescopingFactorization {
 public:
  /// `top_down` holds levels L, L-1, ..., 1 in that order.
  TelescopingFactorization(int levels, Index rank, std::vector<LevelFactors> top_down,
                           DenseMatrix root);

  int levels() const { return levels_; }
  Index rank() const { return rank_; }
  Index dim() const { return (Index{1} << (levels_ + 1)) * rank_; }

  /// Factors of level `l`, 1 <= l <= L.
  const LevelFactors& level(int l) const;
  const DenseMatrix& root() const { return root_; }

  /// The HSS(L-1, k) factorization of B^(L), i.e. this one without level L.
  /// Requires L >= 2.
  TelescopingFactorization without_top_level() const;

 private:
  int levels_;
  Index rank_;
  std::vector<LevelFactors> top_down_;
  DenseMatrix root_;
};

/// SSS(l, k) matrix U X V^T + D.
struct SSSFactorization {
  int level = 0;
  Index rank = 0;
  BlockDiagonalBasis u;
  BlockDiagonalBasis v;
  DenseMatrix x;
  BlockDiagonalDense d;

  DenseMatrix dense() const;
};

/// Expands the telescoping recursion bottom-up.
DenseMatrix reconstruct_dense(const TelescopingFactorization& t);

/// reconstruct_dense(t) * x in O(N k) work per column.
DenseMatrix hss_apply(const TelescopingFactorization& t, const DenseMatrix& x,
                      ExecPolicy exec = ExecPolicy::serial);
DenseMatrix hss_apply_transpose(const TelescopingFactorization& t, const DenseMatrix& x,
                                ExecPolicy exec = ExecPolicy::serial);

/// True iff at every level l = 1..L every HSS block row and column of the
/// 2^l x 2^l repartitioning of `a` has (k+1)-th singular value at most
/// tol * sigma_max(a).
bool validate_hss_ranks(const DenseMatrix& a, int levels, Index rank, double tol);

/// Largest (k+1)-th singular value over all block rows and columns, relative
/// to sigma_max(a). Zero for the zero matrix.
double max_relative_excess_singular_value(const DenseMatrix& a, int levels, Index rank);

/// Random HSS(L, k) factorization: Haar-like orthonormal bases and Gaussian
/// diagonal blocks and root.
TelescopingFactorization random_telescoping(int levels, Index rank, std::uint64_t seed);

}  // namespace hssmv
