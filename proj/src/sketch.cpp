#include "hssmv/sketch.hpp"

#include <string>

#include "hssmv/error.hpp"
#include "hssmv/kernels.hpp"

namespace hssmv {

DenseMatrix sample_sketch(const RngStream& base, int level, Index block_count, Index block_rows,
                          Index width, StreamRole role) {
  DenseMatrix out(block_count * block_rows, width);
  for (Index i = 0; i < block_count; ++i) {
    out.middleRows(i * block_rows, block_rows) = gaussian(block_rows, width, base.child(level, i, role));
  }
  return out;
}

SketchBundle sample_bundle(const RngStream& base, int level, Index block_count, Index block_rows,
                           Index width) {
  SketchBundle b;
  b.block_rows = block_rows;
  b.omega = sample_sketch(base, level, block_count, block_rows, width, StreamRole::omega);
  b.omega_tilde = sample_sketch(base, level, block_count, block_rows, width, StreamRole::omega_tilde);
  b.psi = sample_sketch(base, level, block_count, block_rows, width, StreamRole::psi);
  b.psi_tilde = sample_sketch(base, level, block_count, block_rows, width, StreamRole::psi_tilde);
  return b;
}

Nullified block_nullify(const DenseMatrix& omega, const DenseMatrix& y, Index block_rows, Index i) {
  if (block_rows < 1 || omega.rows() % block_rows != 0 || y.rows() != omega.rows() ||
      y.cols() != omega.cols()) {
    fail(ErrorKind::dimension_mismatch, "block_nullify: sketch and image shapes disagree");
  }
  if (i < 0 || i >= omega.rows() / block_rows) {
    fail(ErrorKind::index_out_of_range, "block_nullify: block " + std::to_string(i));
  }
  if (omega.cols() <= block_rows) {
    fail(ErrorKind::sketch_too_small, "block_nullify: width " + std::to_string(omega.cols()) +
                                          " leaves no nullspace for " +
                                          std::to_string(block_rows) + " rows");
  }
  Nullified out;
  out.p = nullspace_basis(omega.middleRows(i * block_rows, block_rows));
  if (out.p.cols() != omega.cols() - block_rows) {
    fail(ErrorKind::rank_deficient, "block_nullify: sketch block " + std::to_string(i) +
                                        " is rank deficient");
  }
  out.sketch = y.middleRows(i * block_rows, block_rows) * out.p;
  return out;
}

DenseMatrix pcps_basis(const DenseMatrix& sketch, Index rank) {
  if (sketch.cols() < rank + 2) {
    fail(ErrorKind::sketch_too_small, "pcps_basis: " + std::to_string(sketch.cols()) +
                                          " columns, need at least k + 2 = " +
                                          std::to_string(rank + 2));
  }
  return truncated_svd_left(sketch, rank);
}

DenseMatrix recover_diagonal(const DenseMatrix& u, const DenseMatrix& v, const DenseMatrix& y_tilde_i,
                             const DenseMatrix& omega_tilde_i, const DenseMatrix& z_tilde_i,
                             const DenseMatrix& psi_tilde_i) {
  const Index m = u.rows();
  if (v.rows() != m || y_tilde_i.rows() != m || z_tilde_i.rows() != m || omega_tilde_i.rows() != m ||
      psi_tilde_i.rows() != m) {
    fail(ErrorKind::dimension_mismatch, "recover_diagonal: block sizes disagree");
  }
  DenseMatrix row_part = right_pinv_apply(y_tilde_i, omega_tilde_i);
  DenseMatrix col_part = right_pinv_apply(z_tilde_i, psi_tilde_i);
  row_part -= u * (u.transpose() * row_part);
  col_part -= v * (v.transpose() * col_part);
  DenseMatrix ct = col_part.transpose();
  return row_part + u * (u.transpose() * ct);
}

}  // namespace hssmv
