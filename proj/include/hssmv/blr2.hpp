#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hssmv/oracle.hpp"
#include "hssmv/parallel.hpp"
#include "hssmv/rng.hpp"
#include "hssmv/structures.hpp"

namespace hssmv {

/// Inadmissible-block pattern S of a b x b block partition with blocks of
/// size m. Indices are zero-based internally; pattern files are one-based.
class BLR2Pattern {
 public:
  BLR2Pattern(Index block_count, Index block_size, std::vector<std::pair<Index, Index>> pairs);

  static BLR2Pattern diagonal(Index block_count, Index block_size);
  static BLR2Pattern tridiagonal(Index block_count, Index block_size);
  /// One "i j" pair per line, one-based; blank lines and '#' comments ignored.
  static BLR2Pattern from_file(const std::string& path, Index block_count, Index block_size);
  /// "diag", "tridiag", or a path to a pair-list file.
  static BLR2Pattern parse(const std::string& spec, Index block_count, Index block_size);

  Index block_count() const { return b_; }
  Index block_size() const { return m_; }
  Index dim() const { return b_ * m_; }

  bool contains(Index i, Index j) const;
  const std::vector<std::pair<Index, Index>>& pairs() const { return pairs_; }

  /// R_i: columns j with (i, j) in S, ascending.
  const std::vector<Index>& row_set(Index i) const { return rows_[static_cast<std::size_t>(i)]; }
  /// C_j: rows i with (i, j) in S, ascending.
  const std::vector<Index>& col_set(Index j) const { return cols_[static_cast<std::size_t>(j)]; }
  /// R_i': columns j with (i, j) not in S.
  std::vector<Index> row_complement(Index i) const;
  std::vector<Index> col_complement(Index j) const;

  /// Largest |R_i| or |C_j|.
  Index s_max() const { return s_max_; }

  /// Minimum sketch width s_max m + k + 2.
  Index min_sketch_width(Index rank) const { return s_max_ * m_ + rank + 2; }

 private:
  Index b_;
  Index m_;
  std::vector<std::pair<Index, Index>> pairs_;
  std::vector<std::vector<Index>> rows_;
  std::vector<std::vector<Index>> cols_;
  Index s_max_ = 0;
};

/// U X V^T + D with block-diagonal orthonormal U, V (m x k blocks) and D
/// nonzero only on the pattern.
struct BLR2Factorization {
  BLR2Pattern pattern;
  Index rank;
  BlockDiagonalBasis u;
  BlockDiagonalBasis v;
  DenseMatrix x;
  /// Blocks D_ij in the order of pattern.pairs().
  std::vector<DenseMatrix> d;

  DenseMatrix remainder_dense() const;
};

/// Stacks the row blocks of `omega` listed in `blocks`.
DenseMatrix gather_row_blocks(const DenseMatrix& omega, const std::vector<Index>& blocks,
                              Index block_size);

/// rho_i(A): the admissible blocks A_ij, j in R_i', side by side.
DenseMatrix blr2_block_row(const DenseMatrix& a, const BLR2Pattern& pattern, Index i);
/// gamma_j(A): the admissible blocks A_ij, i in C_j', stacked.
DenseMatrix blr2_block_col(const DenseMatrix& a, const BLR2Pattern& pattern, Index j);

struct Blr2Nullified {
  /// Orthonormal basis of null(Omega_{R_i}); s - |R_i| m columns.
  DenseMatrix p;
  /// Y_i P = rho_i(A) * (Omega_{R_i'} P).
  DenseMatrix sketch;
};

/// Nullifies the inadmissible blocks R_i of row block i. Requires
/// s >= s_max m + k + 2.
Blr2Nullified blr2_block_nullify(const DenseMatrix& omega, const DenseMatrix& y,
                                 const BLR2Pattern& pattern, Index i, Index rank);

struct Blr2Options {
  ExecPolicy exec = ExecPolicy::parallel;
  /// Level label under which the sketches are drawn. With level l, block size
  /// 2k and a diagonal pattern the draws coincide with the fresh HSS builder's
  /// sketches at level l.
  int stream_level = 0;
};

struct Blr2Result {
  BLR2Factorization factorization;
  /// 4 s queries for the four sketches.
  QueryCount sketch_queries;
  /// b k forward probes A V used to form X.
  QueryCount coupling_queries;
};

Blr2Result blr2_from_matvecs(const MatvecOracle& oracle, const BLR2Pattern& pattern, Index rank,
                             Index sketch_width, std::uint64_t seed, Blr2Options options = {});

DenseMatrix blr2_reconstruct(const BLR2Factorization& f);
DenseMatrix blr2_apply(const BLR2Factorization& f, const DenseMatrix& x);

/// Constants of the BLR2 builder; factor = (gamma_r + gamma_c)(1 + gamma_d).
struct Blr2Bounds {
  double gamma_r = 0;
  double gamma_c = 0;
  double gamma_d = 0;
  double factor = 0;
};

Blr2Bounds blr2_bounds(Index sketch_width, Index s_max, Index block_size, Index rank);

/// Random exactly-BLR2 matrix on `pattern` with rank-k bases.
BLR2Factorization random_blr2(const BLR2Pattern& pattern, Index rank, std::uint64_t seed);

}  // namespace hssmv
