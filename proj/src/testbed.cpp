#include "hssmv/testbed.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hssmv/error.hpp"
#include "hssmv/rng.hpp"

namespace hssmv {

DenseMatrix hard_instance(int levels, double delta) {
  if (levels < 1 || levels > 14) fail(ErrorKind::invalid_argument, "hard_instance: L out of range");
  if (!(delta > 0 && delta < 1)) fail(ErrorKind::invalid_argument, "hard_instance: delta must be in (0, 1)");
  const Index nb = Index{1} << levels;
  DenseMatrix a = DenseMatrix::Zero(2 * nb, 2 * nb);
  for (Index i = 0; i < nb; ++i) {
    for (Index j = 0; j < nb; ++j) {
      auto blk = a.block(2 * i, 2 * j, 2, 2);
      if (i + j == nb - 1) {
        blk(0, 1) = 1 + delta;
        blk(1, 0) = 1;
      } else {
        blk(0, 0) = 1;
        blk(1, 1) = 1;
      }
    }
  }
  return a;
}

DenseMatrix hard_instance_reference(int levels) {
  if (levels < 1 || levels > 14) fail(ErrorKind::invalid_argument, "hard_instance_reference: L out of range");
  const Index n = Index{2} << levels;
  return DenseMatrix::Constant(n, n, 0.5);
}

namespace {

SymmetricBandMatrix random_band(Index n, Index bandwidth, std::uint64_t seed) {
  if (bandwidth < 1 || bandwidth % 2 == 0) {
    fail(ErrorKind::invalid_argument, "bandwidth must be odd and positive, got " + std::to_string(bandwidth));
  }
  const Index p = (bandwidth - 1) / 2;
  if (p >= n) fail(ErrorKind::invalid_argument, "bandwidth exceeds the matrix size");
  SymmetricBandMatrix m(n, p);
  std::mt19937_64 gen(RngStream(seed).child(0, 0, StreamRole::matrix).key());
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector rowsum = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = std::max<Index>(0, i - p); j < i; ++j) {
      const double v = unif(gen);
      m.set(i, j, v);
      rowsum(i) += std::abs(v);
      rowsum(j) += std::abs(v);
    }
  }
  for (Index i = 0; i < n; ++i) m.set(i, i, rowsum(i) + 1.0);
  return m;
}

}  // namespace

BandedInverseOracle::BandedInverseOracle(Index n, Index bandwidth, std::uint64_t seed)
    : matrix_(random_band(n, bandwidth, seed)), chol_(matrix_) {}

std::unique_ptr<BandedInverseOracle> banded_inverse_oracle(Index n, Index bandwidth, std::uint64_t seed) {
  return std::make_unique<BandedInverseOracle>(n, bandwidth, seed);
}

namespace {

// Principal block of the full grid Laplacian on one 25-column half, ordered
// row-major (r * 25 + c). `outer` is the local column on the grid boundary,
// which has one horizontal neighbour instead of two.
SymmetricBandMatrix half_grid_laplacian(Index rows, Index outer) {
  const Index cols = GridSchurOracle::kHalfCols;
  SymmetricBandMatrix m(rows * cols, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const Index v = r * cols + c;
      const double degree = (r > 0) + (r + 1 < rows) + (c == outer ? 1 : 2);
      m.set(v, v, degree);
      if (r > 0) m.set(v, v - cols, -1.0);
      if (c > 0) m.set(v, v - 1, -1.0);
    }
  }
  return m;
}

}  // namespace

GridSchurOracle::GridSchurOracle(Index rows) : rows_(rows) {
  if (rows < 2) fail(ErrorKind::invalid_argument, "grid needs at least two rows");
  // V1 = columns 0..24, V2 = columns 26..50.
  left_ = std::make_unique<BandCholesky>(half_grid_laplacian(rows, 0));
  right_ = std::make_unique<BandCholesky>(half_grid_laplacian(rows, kHalfCols - 1));
}

DenseMatrix GridSchurOracle::apply(const DenseMatrix& x) const {
  if (x.rows() != rows_) fail(ErrorKind::dimension_mismatch, "GridSchurOracle::apply");
  DenseMatrix y(rows_, x.cols());
  // L33: separator column, horizontal degree 2.
  for (Index r = 0; r < rows_; ++r) {
    const double degree = 2.0 + (r > 0) + (r + 1 < rows_);
    y.row(r) = degree * x.row(r);
    if (r > 0) y.row(r) -= x.row(r - 1);
    if (r + 1 < rows_) y.row(r) -= x.row(r + 1);
  }
  // L3j Ljj^-1 Lj3 where Lj3 is -1 on the subgrid column next to the separator.
  auto eliminate = [&](const BandCholesky& chol, Index adjacent) {
    DenseMatrix t = DenseMatrix::Zero(rows_ * kHalfCols, x.cols());
    for (Index r = 0; r < rows_; ++r) t.row(r * kHalfCols + adjacent) = x.row(r);
    DenseMatrix s = chol.solve(t);
    for (Index r = 0; r < rows_; ++r) y.row(r) -= s.row(r * kHalfCols + adjacent);
  };
  eliminate(*left_, kHalfCols - 1);
  eliminate(*right_, 0);
  return y;
}

std::unique_ptr<GridSchurOracle> grid_schur_oracle(Index rows) {
  return std::make_unique<GridSchurOracle>(rows);
}

DenseMatrix bie_star_matrix(Index nodes, double amplitude, int arms) {
  if (nodes < 2) fail(ErrorKind::invalid_argument, "bie_star_matrix needs at least two nodes");
  if (!(std::abs(amplitude) < 1)) fail(ErrorKind::invalid_argument, "star amplitude must be below 1");
  const double pi = std::numbers::pi;
  const double w = arms;
  Eigen::MatrixX2d x(nodes, 2), n(nodes, 2);
  Vector weight(nodes), kappa(nodes);
  for (Index j = 0; j < nodes; ++j) {
    const double t = 2 * pi * static_cast<double>(j) / static_cast<double>(nodes);
    const double r = 1 + amplitude * std::cos(w * t);
    const double dr = -amplitude * w * std::sin(w * t);
    const double ddr = -amplitude * w * w * std::cos(w * t);
    const double c = std::cos(t), s = std::sin(t);
    const double x1 = r * c, x2 = r * s;
    const double d1 = dr * c - r * s, d2 = dr * s + r * c;
    const double dd1 = ddr * c - 2 * dr * s - r * c;
    const double dd2 = ddr * s + 2 * dr * c - r * s;
    const double speed = std::hypot(d1, d2);
    x(j, 0) = x1;
    x(j, 1) = x2;
    n(j, 0) = d2 / speed;
    n(j, 1) = -d1 / speed;
    weight(j) = 2 * pi / static_cast<double>(nodes) * speed;
    kappa(j) = (d1 * dd2 - d2 * dd1) / (speed * speed * speed);
  }
  DenseMatrix a(nodes, nodes);
  for (Index i = 0; i < nodes; ++i) {
    for (Index j = 0; j < nodes; ++j) {
      if (i == j) {
        a(i, i) = 0.5 - weight(i) * kappa(i) / (4 * pi);
        continue;
      }
      const double r1 = x(i, 0) - x(j, 0), r2 = x(i, 1) - x(j, 1);
      const double k = (n(i, 0) * r1 + n(i, 1) * r2) / (r1 * r1 + r2 * r2);
      a(i, j) = -weight(j) / (2 * pi) * k;
    }
  }
  return a;
}

double frobenius_error(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::dimension_mismatch, "frobenius_error");
  const double na = a.norm();
  if (na == 0) fail(ErrorKind::zero_norm, "frobenius_error: reference matrix is zero");
  return (a - b).norm() / na;
}

double frobenius_error(const DenseMatrix& a, const TelescopingFactorization& t) {
  return frobenius_error(a, reconstruct_dense(t));
}

DenseMatrix random_hss_matrix(int levels, Index rank, std::uint64_t seed) {
  return reconstruct_dense(random_telescoping(levels, rank, seed));
}

}  // namespace hssmv
