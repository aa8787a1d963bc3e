#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace hssmv {

using Index = Eigen::Index;

/// Row-major table of doubles; the interchange type for every explicit block.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline double frobenius_sq(const DenseMatrix& a) { return a.squaredNorm(); }

/// Throws non_finite if any entry is NaN or Inf.
void require_finite(const DenseMatrix& a, const char* what);

/// Block-row slice [first*rows_per_block, (first+count)*rows_per_block).
inline auto row_block(const DenseMatrix& a, Index block, Index rows_per_block) {
  return a.middleRows(block * rows_per_block, rows_per_block);
}
inline auto row_block(DenseMatrix& a, Index block, Index rows_per_block) {
  return a.middleRows(block * rows_per_block, rows_per_block);
}

}  // namespace hssmv
