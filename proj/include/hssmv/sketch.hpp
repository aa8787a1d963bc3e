#pragma once

#include "hssmv/dense.hpp"
#include "hssmv/rng.hpp"

namespace hssmv {

/// Test matrices of one level and their images under A^(l+1) and its
/// transpose, all partitioned into row blocks of `block_rows`.
struct SketchBundle {
  Index block_rows = 0;
  DenseMatrix omega, omega_tilde, psi, psi_tilde;
  DenseMatrix y, y_tilde, z, z_tilde;

  Index width() const { return omega.cols(); }
  Index block_count() const { return block_rows == 0 ? 0 : omega.rows() / block_rows; }
};

/// Gaussian sketch of block_count * block_rows rows and `width` columns;
/// row block i is drawn from base.child(level, i, role), so each block has its
/// own stream and the draw is schedule independent.
DenseMatrix sample_sketch(const RngStream& base, int level, Index block_count, Index block_rows,
                          Index width, StreamRole role);

/// Draws omega, omega_tilde, psi and psi_tilde for one level.
SketchBundle sample_bundle(const RngStream& base, int level, Index block_count, Index block_rows,
                           Index width);

struct Nullified {
  /// Orthonormal basis of null(omega_i), width - block_rows columns.
  DenseMatrix p;
  /// y_i * p, a Gaussian sketch of the off-diagonal block row.
  DenseMatrix sketch;
};

/// Block nullification of row block i. Throws rank_deficient if omega_i does
/// not have full row rank.
Nullified block_nullify(const DenseMatrix& omega, const DenseMatrix& y, Index block_rows,
                        Index i);

/// Top-k left singular vectors of a sketch with at least k + 2 columns.
DenseMatrix pcps_basis(const DenseMatrix& sketch, Index rank);

/// D_i = (I - U U^T) Y~_i pinv(Omega~_i) + U U^T [(I - V V^T) Z~_i pinv(Psi~_i)]^T.
DenseMatrix recover_diagonal(const DenseMatrix& u, const DenseMatrix& v,
                             const DenseMatrix& y_tilde_i, const DenseMatrix& omega_tilde_i,
                             const DenseMatrix& z_tilde_i, const DenseMatrix& psi_tilde_i);

}  // namespace hssmv
