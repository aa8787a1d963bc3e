#include <gtest/gtest.h>

#include "hssmv/greedy_explicit.hpp"
#include "hssmv/kernels.hpp"
#include "hssmv/testbed.hpp"
#include "test_util.hpp"

namespace hssmv {
namespace {

using testing::kind_of;
using testing::max_abs;
using testing::randn;

DenseMatrix step_dense(const SSSStep& s) {
  return s.factors.d.dense() + s.factors.u.dense() * s.next * s.factors.v.dense().transpose();
}

TEST(SssStep, ExactOnSssMatrix) {
  const auto t = random_telescoping(3, 2, 31);
  const DenseMatrix a = reconstruct_dense(t);
  const SSSStep s = sss_step_explicit(a, 3, 2);
  EXPECT_LE(testing::rel_diff(step_dense(s), a), 1e-12);
  EXPECT_EQ(s.next.rows(), 16);
}

TEST(SssStep, HardInstanceBases) {
  const SSSStep s = sss_step_explicit(hard_instance(2, 0.1), 2, 1);
  for (Index i = 0; i < 4; ++i) {
    // Row blocks carry more energy in their first row, column blocks in their second column.
    EXPECT_NEAR(std::abs(s.factors.u.block(i)(0, 0)), 1.0, 1e-12) << i;
    EXPECT_NEAR(s.factors.u.block(i)(1, 0), 0.0, 1e-12) << i;
    EXPECT_NEAR(s.factors.v.block(i)(0, 0), 0.0, 1e-12) << i;
    EXPECT_NEAR(std::abs(s.factors.v.block(i)(1, 0)), 1.0, 1e-12) << i;
  }
}

TEST(SssStep, DiagonalBlocksAreCopied) {
  const DenseMatrix a = randn(16, 16, 3);
  const SSSStep s = sss_step_explicit(a, 2, 2);
  for (Index i = 0; i < 4; ++i) EXPECT_EQ(s.factors.d.block(i), a.block(4 * i, 4 * i, 4, 4));
}

// Each U_i is the best rank-k basis for its block row: the residual equals
// the tail singular energy (oracle: BDCSVD values).
TEST(SssStep, BasesAreBlockwiseOptimal) {
  const DenseMatrix a = randn(32, 32, 4);
  const BlockPartition part(3, 2);
  const SSSStep s = sss_step_explicit(a, 3, 2);
  for (Index i = 0; i < 8; ++i) {
    const DenseMatrix row = hss_block_row(a, part, i);
    const DenseMatrix& u = s.factors.u.block(i);
    const Eigen::MatrixXd rowd = row;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(rowd);
    const double tail2 = svd.singularValues().tail(2).squaredNorm();
    EXPECT_NEAR((row - u * (u.transpose() * row)).squaredNorm(), tail2, 1e-10 * row.squaredNorm());
  }
}

// ||A - B||^2 splits into the row residuals plus the column residual of the
// projected off-diagonal part.
TEST(SssStep, PythagoreanSplit) {
  const DenseMatrix a = randn(16, 16, 5);
  const BlockPartition part(2, 2);
  const SSSStep s = sss_step_explicit(a, 2, 2);
  const DenseMatrix u = s.factors.u.dense(), v = s.factors.v.dense();
  DenseMatrix off = a;
  for (Index i = 0; i < 4; ++i) off.block(4 * i, 4 * i, 4, 4).setZero();
  double row_res = 0;
  for (Index i = 0; i < 4; ++i) {
    const DenseMatrix r = hss_block_row(a, part, i);
    const DenseMatrix& ui = s.factors.u.block(i);
    row_res += (r - ui * (ui.transpose() * r)).squaredNorm();
  }
  const DenseMatrix pu_off = u * (u.transpose() * off);
  const double col_res = (pu_off - pu_off * v * v.transpose()).squaredNorm();
  EXPECT_NEAR((a - step_dense(s)).squaredNorm(), row_res + col_res, 1e-10 * a.squaredNorm());
}

TEST(SssStep, Errors) {
  EXPECT_EQ(kind_of([] { sss_step_explicit(randn(16, 16, 1), 3, 2); }), ErrorKind::dimension_mismatch);
  EXPECT_EQ(kind_of([] { sss_step_explicit(randn(8, 8, 1), 0, 2); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { sss_step_explicit(randn(16, 12, 1), 2, 2); }), ErrorKind::dimension_mismatch);
}

TEST(GreedyHss, ShapesAndExactRecovery) {
  const DenseMatrix a = random_hss_matrix(4, 4, 11);
  const auto t = greedy_hss_explicit(a, 4, 4);
  EXPECT_EQ(t.levels(), 4);
  EXPECT_EQ(t.rank(), 4);
  EXPECT_EQ(t.root().rows(), 8);
  for (int l = 1; l <= 4; ++l) EXPECT_EQ(t.level(l).u.block_count(), Index{1} << l);
  EXPECT_LE(frobenius_error(a, t), 1e-10);
}

TEST(GreedyHss, HardInstanceIsFarFromOptimal) {
  const double delta = 0.1;
  const std::pair<int, double> floors[] = {{2, 16.0}, {4, 448.0}};
  for (const auto& [levels, floor] : floors) {
    const DenseMatrix a = hard_instance(levels, delta);
    const auto t = greedy_hss_explicit(a, levels, 1);
    const double greedy2 = (a - reconstruct_dense(t)).squaredNorm();
    EXPECT_GE(greedy2, floor) << levels;
  }
  const DenseMatrix a = hard_instance(4, delta);
  const double greedy2 = (a - reconstruct_dense(greedy_hss_explicit(a, 4, 1))).squaredNorm();
  const double ref2 = (a - hard_instance_reference(4)).squaredNorm();
  EXPECT_NEAR(ref2, 257.76, 1e-9);
  EXPECT_GE(greedy2 / ref2, 1.7);
}

TEST(GreedyHss, ReferenceIsHss) {
  EXPECT_TRUE(validate_hss_ranks(hard_instance_reference(4), 4, 1, 1e-10));
}

TEST(GreedyHss, ZeroMatrix) {
  const auto t = greedy_hss_explicit(DenseMatrix::Zero(32, 32), 3, 2);
  EXPECT_EQ(max_abs(reconstruct_dense(t)), 0.0);
}

}  // namespace
}  // namespace hssmv
