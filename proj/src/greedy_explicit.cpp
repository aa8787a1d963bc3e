#include "hssmv/greedy_explicit.hpp"

#include <string>

#include "hssmv/error.hpp"
#include "hssmv/kernels.hpp"

namespace hssmv {

SSSStep sss_step_explicit(const DenseMatrix& a, int level, Index rank, ExecPolicy exec) {
  if (level < 1) fail(ErrorKind::invalid_argument, "sss_step_explicit needs level >= 1");
  const BlockPartition part(level, rank);
  if (a.rows() != part.dim() || a.cols() != part.dim()) {
    fail(ErrorKind::dimension_mismatch, "sss_step_explicit: matrix is " + std::to_string(a.rows()) +
                                            "x" + std::to_string(a.cols()) + ", level needs " +
                                            std::to_string(part.dim()));
  }
  require_finite(a, "sss_step_explicit input");
  const Index n = part.block_count();
  const Index m = part.block_size();
  std::vector<DenseMatrix> u(static_cast<std::size_t>(n));
  std::vector<DenseMatrix> v(static_cast<std::size_t>(n));
  std::vector<DenseMatrix> d(static_cast<std::size_t>(n));
  for_each_block(exec, n, [&](std::int64_t i) {
    const auto ui = static_cast<std::size_t>(i);
    u[ui] = truncated_svd_left(hss_block_row(a, part, i), rank);
    v[ui] = truncated_svd_left(hss_block_col(a, part, i).transpose(), rank);
    d[ui] = a.block(i * m, i * m, m, m);
  });
  SSSStep step{LevelFactors{BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                            BlockDiagonalDense(std::move(d))},
               DenseMatrix()};
  DenseMatrix off = a;
  for (Index i = 0; i < n; ++i) off.block(i * m, i * m, m, m).setZero();
  step.next = step.factors.v.right_apply(step.factors.u.apply_transpose(off, exec));
  return step;
}

TelescopingFactorization greedy_hss_explicit(const DenseMatrix& a, int levels, Index rank,
                                             ExecPolicy exec) {
  const BlockPartition top(levels, rank);
  if (levels < 1 || a.rows() != top.dim() || a.cols() != top.dim()) {
    fail(ErrorKind::dimension_mismatch, "greedy_hss_explicit: matrix is " +
                                            std::to_string(a.rows()) + "x" +
                                            std::to_string(a.cols()) + ", HSS needs " +
                                            std::to_string(top.dim()));
  }
  std::vector<LevelFactors> top_down;
  DenseMatrix current = a;
  for (int l = levels; l >= 1; --l) {
    SSSStep step = sss_step_explicit(current, l, rank, exec);
    top_down.push_back(std::move(step.factors));
    current = std::move(step.next);
  }
  return TelescopingFactorization(levels, rank, std::move(top_down), std::move(current));
}

}  // namespace hssmv
