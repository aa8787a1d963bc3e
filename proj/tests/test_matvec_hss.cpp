#include <gtest/gtest.h>

#include "hssmv/matvec_hss.hpp"
#include "hssmv/testbed.hpp"
#include "test_util.hpp"

namespace hssmv {
namespace {

using testing::kind_of;

MatvecConfig config(int levels, Index k, Index s, std::uint64_t seed, SketchPolicy policy,
                    BasisMethod basis = BasisMethod::svd_pcps) {
  MatvecConfig c;
  c.levels = levels;
  c.rank = k;
  c.sketch_width = s;
  c.seed = seed;
  c.policy = policy;
  c.basis = basis;
  return c;
}

void expect_same(const TelescopingFactorization& a, const TelescopingFactorization& b) {
  for (int l = 1; l <= a.levels(); ++l) {
    for (Index i = 0; i < a.level(l).u.block_count(); ++i) {
      EXPECT_EQ(a.level(l).u.block(i), b.level(l).u.block(i));
      EXPECT_EQ(a.level(l).v.block(i), b.level(l).v.block(i));
      EXPECT_EQ(a.level(l).d.block(i), b.level(l).d.block(i));
    }
  }
  EXPECT_EQ(a.root(), b.root());
}

TEST(Fresh, ExactRecovery) {
  for (auto [levels, k] : {std::pair{3, Index{2}}, std::pair{4, Index{4}}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const DenseMatrix a = random_hss_matrix(levels, k, 40 + seed);
      const DenseOracle op(a);
      const auto r = hss_from_matvecs(op, config(levels, k, 3 * k + 2, seed, SketchPolicy::fresh));
      EXPECT_LE(frobenius_error(a, r.factorization), 1e-9) << levels << " " << seed;
    }
  }
}

TEST(Reused, ExactRecoveryBothBases) {
  const DenseMatrix a = random_hss_matrix(4, 4, 3);
  const DenseOracle op(a);
  for (BasisMethod b : {BasisMethod::svd_pcps, BasisMethod::pivoted_qr}) {
    const auto r = hss_from_matvecs(op, config(4, 4, 14, 9, SketchPolicy::reused, b));
    EXPECT_LE(frobenius_error(a, r.factorization), 1e-9) << to_string(b);
  }
}

TEST(Queries, FreshAndReusedCounts) {
  const DenseOracle inner(random_hss_matrix(4, 4, 3));
  CountingOracle op(inner);
  const auto fresh = hss_from_matvecs(op, config(4, 4, 14, 1, SketchPolicy::fresh));
  EXPECT_EQ(fresh.sketch_queries.total(), 224u);
  EXPECT_EQ(fresh.root_queries.total(), 8u);
  EXPECT_EQ(op.count().total(), 232u);
  EXPECT_EQ(op.count().forward, 120u);  // root probes are forward only
  op.reset();
  const auto reused = hss_from_matvecs(op, config(4, 4, 14, 1, SketchPolicy::reused));
  EXPECT_EQ(reused.sketch_queries.total(), 56u);
  EXPECT_EQ(reused.total_queries().total(), 64u);
  EXPECT_EQ(op.count().total(), 64u);
}

// Both builders draw the same top-level sketches.
TEST(Reused, TopLevelMatchesFresh) {
  const DenseOracle op(testing::randn(64, 64, 12));
  const auto fresh = hss_from_matvecs(op, config(3, 4, 16, 5, SketchPolicy::fresh));
  const auto reused = hss_from_matvecs(op, config(3, 4, 16, 5, SketchPolicy::reused));
  for (Index i = 0; i < 8; ++i) {
    EXPECT_EQ(fresh.factorization.level(3).u.block(i), reused.factorization.level(3).u.block(i));
    EXPECT_EQ(fresh.factorization.level(3).v.block(i), reused.factorization.level(3).v.block(i));
    EXPECT_EQ(fresh.factorization.level(3).d.block(i), reused.factorization.level(3).d.block(i));
  }
  EXPECT_NE(fresh.factorization.level(2).u.block(0), reused.factorization.level(2).u.block(0));
}

TEST(Builders, Deterministic) {
  const auto op = banded_inverse_oracle(256, 9, 3);
  for (SketchPolicy p : {SketchPolicy::fresh, SketchPolicy::reused}) {
    const auto cfg = config(4, 8, 26, 17, p);
    expect_same(hss_from_matvecs(*op, cfg).factorization, hss_from_matvecs(*op, cfg).factorization);
  }
}

TEST(Builders, SeedChangesResult) {
  const DenseOracle op(testing::randn(32, 32, 2));
  const auto a = hss_from_matvecs(op, config(2, 4, 14, 1, SketchPolicy::fresh));
  const auto b = hss_from_matvecs(op, config(2, 4, 14, 2, SketchPolicy::fresh));
  EXPECT_NE(a.factorization.level(2).u.block(0), b.factorization.level(2).u.block(0));
}

TEST(Config, Floors) {
  const DenseOracle op(testing::randn(32, 32, 2));
  EXPECT_EQ(kind_of([&] { hss_from_matvecs(op, config(2, 4, 13, 0, SketchPolicy::fresh)); }),
            ErrorKind::sketch_too_small);
  EXPECT_EQ(kind_of([&] { hss_from_matvecs(op, config(2, 4, 13, 0, SketchPolicy::reused)); }),
            ErrorKind::sketch_too_small);
  EXPECT_EQ(kind_of([&] { hss_from_matvecs(op, config(2, 4, 11, 0, SketchPolicy::reused, BasisMethod::pivoted_qr)); }),
            ErrorKind::sketch_too_small);
  EXPECT_NO_THROW(hss_from_matvecs(op, config(2, 4, 12, 0, SketchPolicy::reused, BasisMethod::pivoted_qr)));
  EXPECT_EQ(kind_of([&] { hss_from_matvecs(op, config(3, 4, 14, 0, SketchPolicy::fresh)); }),
            ErrorKind::dimension_mismatch);
  EXPECT_EQ(kind_of([&] { hss_from_matvecs(op, config(0, 4, 14, 0, SketchPolicy::fresh)); }),
            ErrorKind::invalid_argument);
}

TEST(TheoremBounds, Values) {
  const TheoremBounds b = theorem_bounds(40, 8, 1);
  EXPECT_NEAR(b.gamma_d, 16.0 / 23.0, 1e-15);
  EXPECT_NEAR(b.gamma_r, 84.10393457119775, 1e-10);
  EXPECT_EQ(b.gamma_c, b.gamma_r);
  EXPECT_NEAR(theorem_bounds(14, 4, 1).gamma_r, 393.34031063812967, 1e-9);
  EXPECT_NEAR(theorem_bounds(14, 4, 4).factor, 8181.478461273097, 1e-8);
  EXPECT_NEAR(theorem_bounds(5, 1, 4).factor * 259.2, 449977.3466974032, 1e-6);
  EXPECT_NEAR(theorem_bounds(7, 1, 4).factor * 259.2, 199991.009304189, 1e-6);
  EXPECT_NEAR(theorem_bounds(9, 1, 4).factor * 259.2, 152738.5334817555, 1e-6);
  EXPECT_EQ(kind_of([] { theorem_bounds(13, 4, 1); }), ErrorKind::sketch_too_small);
}

// Expected error stays inside the Theorem envelope on the hard instance.
TEST(Fresh, HardInstanceWithinBound) {
  const DenseOracle op(hard_instance(4, 0.1));
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = hss_from_matvecs(op, config(4, 1, 5, seed, SketchPolicy::fresh));
    sum += (op.matrix() - reconstruct_dense(r.factorization)).squaredNorm();
  }
  EXPECT_LE(sum / 10, theorem_bounds(5, 1, 4).factor * 259.2);
}

}  // namespace
}  // namespace hssmv
