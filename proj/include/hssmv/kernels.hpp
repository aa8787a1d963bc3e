#pragma once

#include "hssmv/dense.hpp"
#include "hssmv/rng.hpp"

namespace hssmv {

/// Top-k left singular vectors of `b` as orthonormal columns, ordered by
/// descending singular value. Each column is sign-normalized so that its
/// largest-magnitude entry is positive. Singular values equal to within 1e-14
/// relative are ordered by the lexicographically greater normalized vector
/// first, which keeps the retained subspace deterministic across ties.
DenseMatrix truncated_svd_left(const DenseMatrix& b, Index k);

/// Orthonormal basis of null(omega) for a wide omega (rows < cols). Right
/// singular vectors whose singular value is <= 1e-12 * sigma_max, plus the
/// cols - rows trailing ones, make up the basis.
DenseMatrix nullspace_basis(const DenseMatrix& omega);

/// First k columns of Q from a column-pivoted Householder QR of b.
DenseMatrix pivoted_qr_basis(const DenseMatrix& b, Index k);

/// y * pinv(omega) for a wide omega with full row rank, evaluated as a
/// least-squares solve against omega^T rather than by forming the inverse.
DenseMatrix right_pinv_apply(const DenseMatrix& y, const DenseMatrix& omega);

/// rows x cols i.i.d. standard normal entries drawn from `stream`.
DenseMatrix gaussian(Index rows, Index cols, const RngStream& stream);

/// Q factor of a Householder QR of a Gaussian matrix: a random rows x cols
/// matrix with orthonormal columns (cols <= rows).
DenseMatrix random_orthonormal(Index rows, Index cols, const RngStream& stream);

}  // namespace hssmv
