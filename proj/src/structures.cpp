#include "hssmv/structures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hssmv/error.hpp"
#include "hssmv/kernels.hpp"
#include "hssmv/rng.hpp"

namespace hssmv {
namespace {

std::string shape(const DenseMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void check_square_partition(const DenseMatrix& a, Index block_count, Index i) {
  if (a.rows() != a.cols() || block_count < 1 || a.rows() % block_count != 0) {
    fail(ErrorKind::dimension_mismatch,
         shape(a) + " matrix does not split into " + std::to_string(block_count) + " blocks");
  }
  if (i < 0 || i >= block_count) {
    fail(ErrorKind::index_out_of_range,
         "block " + std::to_string(i) + " of " + std::to_string(block_count));
  }
}

Eigen::VectorXd singular_values(const DenseMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::MatrixXd work = a;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(work);
  return svd.singularValues();
}

}  // namespace

BlockPartition::BlockPartition(int level_, Index rank_) : level(level_), rank(rank_) {
  if (level < 0 || level > 30) fail(ErrorKind::invalid_argument, "level out of range");
  if (rank < 1) fail(ErrorKind::rank_out_of_range, "rank must be positive");
}

DenseMatrix off_diagonal_block_row(const DenseMatrix& a, Index block_count, Index i) {
  check_square_partition(a, block_count, i);
  const Index m = a.rows() / block_count;
  DenseMatrix out(m, a.cols() - m);
  const auto rows = a.middleRows(i * m, m);
  out.leftCols(i * m) = rows.leftCols(i * m);
  out.rightCols(a.cols() - (i + 1) * m) = rows.rightCols(a.cols() - (i + 1) * m);
  return out;
}

DenseMatrix off_diagonal_block_col(const DenseMatrix& a, Index block_count, Index i) {
  check_square_partition(a, block_count, i);
  const Index m = a.rows() / block_count;
  DenseMatrix out(a.rows() - m, m);
  const auto cols = a.middleCols(i * m, m);
  out.topRows(i * m) = cols.topRows(i * m);
  out.bottomRows(a.rows() - (i + 1) * m) = cols.bottomRows(a.rows() - (i + 1) * m);
  return out;
}

DenseMatrix hss_block_row(const DenseMatrix& a, const BlockPartition& part, Index i) {
  if (a.rows() != part.dim() || a.cols() != part.dim()) {
    fail(ErrorKind::dimension_mismatch,
         shape(a) + " matrix, partition needs " + std::to_string(part.dim()));
  }
  return off_diagonal_block_row(a, part.block_count(), i);
}

DenseMatrix hss_block_col(const DenseMatrix& a, const BlockPartition& part, Index i) {
  if (a.rows() != part.dim() || a.cols() != part.dim()) {
    fail(ErrorKind::dimension_mismatch,
         shape(a) + " matrix, partition needs " + std::to_string(part.dim()));
  }
  return off_diagonal_block_col(a, part.block_count(), i);
}

BlockDiagonal::BlockDiagonal(std::vector<DenseMatrix> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.rows() != blocks_.front().rows() || b.cols() != blocks_.front().cols()) {
      fail(ErrorKind::invalid_factor, "block-diagonal blocks differ in shape");
    }
    if (!b.allFinite()) fail(ErrorKind::non_finite, "block-diagonal factor");
  }
}

DenseMatrix BlockDiagonal::apply(const DenseMatrix& x, ExecPolicy exec) const {
  if (x.rows() != cols()) {
    fail(ErrorKind::dimension_mismatch,
         "block-diagonal apply: " + std::to_string(cols()) + " vs " + std::to_string(x.rows()));
  }
  DenseMatrix out(rows(), x.cols());
  const Index br = block_rows();
  const Index bc = block_cols();
  for_each_block(exec, block_count(), [&](std::int64_t i) {
    out.middleRows(i * br, br).noalias() = block(i) * x.middleRows(i * bc, bc);
  });
  return out;
}

DenseMatrix BlockDiagonal::apply_transpose(const DenseMatrix& x, ExecPolicy exec) const {
  if (x.rows() != rows()) {
    fail(ErrorKind::dimension_mismatch,
         "block-diagonal apply_transpose: " + std::to_string(rows()) + " vs " +
             std::to_string(x.rows()));
  }
  DenseMatrix out(cols(), x.cols());
  const Index br = block_rows();
  const Index bc = block_cols();
  for_each_block(exec, block_count(), [&](std::int64_t i) {
    out.middleRows(i * bc, bc).noalias() = block(i).transpose() * x.middleRows(i * br, br);
  });
  return out;
}

DenseMatrix BlockDiagonal::right_apply(const DenseMatrix& x) const {
  if (x.cols() != rows()) fail(ErrorKind::dimension_mismatch, "block-diagonal right_apply");
  DenseMatrix out(x.rows(), cols());
  const Index br = block_rows();
  const Index bc = block_cols();
  for (Index i = 0; i < block_count(); ++i) {
    out.middleCols(i * bc, bc).noalias() = x.middleCols(i * br, br) * block(i);
  }
  return out;
}

DenseMatrix BlockDiagonal::right_apply_transpose(const DenseMatrix& x) const {
  if (x.cols() != cols()) {
    fail(ErrorKind::dimension_mismatch, "block-diagonal right_apply_transpose");
  }
  DenseMatrix out(x.rows(), rows());
  const Index br = block_rows();
  const Index bc = block_cols();
  for (Index i = 0; i < block_count(); ++i) {
    out.middleCols(i * br, br).noalias() = x.middleCols(i * bc, bc) * block(i).transpose();
  }
  return out;
}

DenseMatrix BlockDiagonal::dense() const {
  DenseMatrix out = DenseMatrix::Zero(rows(), cols());
  for (Index i = 0; i < block_count(); ++i) {
    out.block(i * block_rows(), i * block_cols(), block_rows(), block_cols()) = block(i);
  }
  return out;
}

BlockDiagonalBasis::BlockDiagonalBasis(std::vector<DenseMatrix> blocks)
    : BlockDiagonal(std::move(blocks)) {
  if (block_cols() > block_rows()) fail(ErrorKind::invalid_factor, "basis block is wide");
  const double defect = orthonormality_defect();
  if (!(defect <= kOrthonormalTol)) {
    fail(ErrorKind::invalid_factor,
         "basis block not orthonormal (defect " + std::to_string(defect) + ")");
  }
}

double BlockDiagonalBasis::orthonormality_defect() const {
  double worst = 0;
  for (const auto& b : blocks()) {
    DenseMatrix g = b.transpose() * b;
    g.diagonal().array() -= 1.0;
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

BlockDiagonalDense::BlockDiagonalDense(std::vector<DenseMatrix> blocks)
    : BlockDiagonal(std::move(blocks)) {
  if (block_rows() != block_cols()) fail(ErrorKind::invalid_factor, "diagonal block not square");
}

TelescopingFactorization::TelescopingFactorization(int levels, Index rank,
                                                   std::vector<LevelFactors> top_down,
                                                   DenseMatrix root)
    : levels_(levels), rank_(rank), top_down_(std::move(top_down)), root_(std::move(root)) {
  if (levels_ < 1 || levels_ > 30) fail(ErrorKind::invalid_factor, "levels out of range");
  if (rank_ < 1) fail(ErrorKind::invalid_factor, "rank must be positive");
  if (static_cast<int>(top_down_.size()) != levels_) {
    fail(ErrorKind::invalid_factor, "expected " + std::to_string(levels_) + " levels, got " +
                                        std::to_string(top_down_.size()));
  }
  for (int l = levels_; l >= 1; --l) {
    const auto& f = level(l);
    const Index n = Index{1} << l;
    const std::string at = " at level " + std::to_string(l);
    if (f.u.block_count() != n || f.v.block_count() != n || f.d.block_count() != n) {
      fail(ErrorKind::invalid_factor, "wrong block count" + at);
    }
    if (f.u.block_rows() != 2 * rank_ || f.u.block_cols() != rank_ ||
        f.v.block_rows() != 2 * rank_ || f.v.block_cols() != rank_) {
      fail(ErrorKind::invalid_factor, "basis blocks must be 2k x k" + at);
    }
    if (f.d.block_rows() != 2 * rank_) fail(ErrorKind::invalid_factor, "D blocks must be 2k x 2k" + at);
  }
  if (root_.rows() != 2 * rank_ || root_.cols() != 2 * rank_) {
    fail(ErrorKind::invalid_factor, "root must be 2k x 2k");
  }
  require_finite(root_, "root");
}

const LevelFactors& TelescopingFactorization::level(int l) const {
  if (l < 1 || l > levels_) fail(ErrorKind::index_out_of_range, "level " + std::to_string(l));
  return top_down_[static_cast<std::size_t>(levels_ - l)];
}

TelescopingFactorization TelescopingFactorization::without_top_level() const {
  if (levels_ < 2) fail(ErrorKind::invalid_argument, "without_top_level needs L >= 2");
  return TelescopingFactorization(levels_ - 1, rank_,
                                  std::vector<LevelFactors>(top_down_.begin() + 1, top_down_.end()),
                                  root_);
}

DenseMatrix SSSFactorization::dense() const {
  DenseMatrix uxv = u.apply(v.right_apply_transpose(x));
  return uxv + d.dense();
}

DenseMatrix reconstruct_dense(const TelescopingFactorization& t) {
  DenseMatrix b = t.root();
  for (int l = 1; l <= t.levels(); ++l) {
    const auto& f = t.level(l);
    DenseMatrix next = f.u.apply(f.v.right_apply_transpose(b));
    for (Index i = 0; i < f.d.block_count(); ++i) {
      const Index m = f.d.block_rows();
      next.block(i * m, i * m, m, m) += f.d.block(i);
    }
    b = std::move(next);
  }
  return b;
}

namespace {

DenseMatrix telescoping_apply(const TelescopingFactorization& t, const DenseMatrix& x,
                              ExecPolicy exec, bool transpose) {
  if (x.rows() != t.dim()) {
    fail(ErrorKind::dimension_mismatch, "hss_apply: operand has " + std::to_string(x.rows()) +
                                            " rows, operator dimension is " +
                                            std::to_string(t.dim()));
  }
  // Upward pass: x_l = V^(l)^T x_{l+1}; with the transpose U and V swap roles.
  std::vector<DenseMatrix> up(static_cast<std::size_t>(t.levels() + 2));
  up[static_cast<std::size_t>(t.levels() + 1)] = x;
  for (int l = t.levels(); l >= 1; --l) {
    const auto& f = t.level(l);
    const auto& right = transpose ? f.u : f.v;
    up[static_cast<std::size_t>(l)] = right.apply_transpose(up[static_cast<std::size_t>(l + 1)], exec);
  }
  DenseMatrix y = transpose ? DenseMatrix(t.root().transpose() * up[1]) : DenseMatrix(t.root() * up[1]);
  // Downward pass: y_{l+1} = U^(l) y_l + D^(l) x_{l+1}.
  for (int l = 1; l <= t.levels(); ++l) {
    const auto& f = t.level(l);
    const auto& left = transpose ? f.v : f.u;
    const DenseMatrix& xin = up[static_cast<std::size_t>(l + 1)];
    DenseMatrix next = left.apply(y, exec);
    DenseMatrix dx = transpose ? f.d.apply_transpose(xin, exec) : f.d.apply(xin, exec);
    next += dx;
    y = std::move(next);
  }
  return y;
}

}  // namespace

DenseMatrix hss_apply(const TelescopingFactorization& t, const DenseMatrix& x, ExecPolicy exec) {
  return telescoping_apply(t, x, exec, false);
}

DenseMatrix hss_apply_transpose(const TelescopingFactorization& t, const DenseMatrix& x,
                                ExecPolicy exec) {
  return telescoping_apply(t, x, exec, true);
}

double max_relative_excess_singular_value(const DenseMatrix& a, int levels, Index rank) {
  BlockPartition top(levels, rank);
  if (a.rows() != top.dim() || a.cols() != top.dim()) {
    fail(ErrorKind::dimension_mismatch,
         shape(a) + " matrix, HSS(" + std::to_string(levels) + "," + std::to_string(rank) +
             ") needs " + std::to_string(top.dim()));
  }
  const Eigen::VectorXd all = singular_values(a);
  const double smax = all.size() > 0 ? all(0) : 0.0;
  if (smax == 0.0) return 0.0;
  double worst = 0;
  for (int l = 1; l <= levels; ++l) {
    const Index n = Index{1} << l;
    for (Index i = 0; i < n; ++i) {
      for (const DenseMatrix& blk : {off_diagonal_block_row(a, n, i), off_diagonal_block_col(a, n, i)}) {
        const Eigen::VectorXd sv = singular_values(blk);
        if (sv.size() > rank) worst = std::max(worst, sv(rank) / smax);
      }
    }
  }
  return worst;
}

bool validate_hss_ranks(const DenseMatrix& a, int levels, Index rank, double tol) {
  if (!(tol >= 0)) fail(ErrorKind::invalid_argument, "tolerance must be non-negative");
  return max_relative_excess_singular_value(a, levels, rank) <= tol;
}

TelescopingFactorization random_telescoping(int levels, Index rank, std::uint64_t seed) {
  if (levels < 1) fail(ErrorKind::invalid_argument, "levels must be positive");
  if (rank < 1) fail(ErrorKind::rank_out_of_range, "rank must be positive");
  const RngStream base(seed);
  std::vector<LevelFactors> top_down;
  for (int l = levels; l >= 1; --l) {
    const Index n = Index{1} << l;
    std::vector<DenseMatrix> u, v, d;
    for (Index i = 0; i < n; ++i) {
      u.push_back(random_orthonormal(2 * rank, rank, base.child(l, i, StreamRole::factor_u)));
      v.push_back(random_orthonormal(2 * rank, rank, base.child(l, i, StreamRole::factor_v)));
      d.push_back(gaussian(2 * rank, 2 * rank, base.child(l, i, StreamRole::factor_d)));
    }
    top_down.push_back(LevelFactors{BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                                    BlockDiagonalDense(std::move(d))});
  }
  DenseMatrix root = gaussian(2 * rank, 2 * rank, base.child(0, 0, StreamRole::root));
  return TelescopingFactorization(levels, rank, std::move(top_down), std::move(root));
}

}  // namespace hssmv
