#include "hssmv/matvec_hss.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hssmv/error.hpp"
#include "hssmv/kernels.hpp"

namespace hssmv {

std::string_view to_string(BasisMethod m) {
  return m == BasisMethod::svd_pcps ? "svd-pcps" : "pivoted-qr";
}

std::string_view to_string(SketchPolicy p) { return p == SketchPolicy::fresh ? "fresh" : "reused"; }

void MatvecConfig::validate() const {
  if (levels < 1 || levels > 30) fail(ErrorKind::invalid_argument, "L must be in [1, 30]");
  if (rank < 1) fail(ErrorKind::rank_out_of_range, "k must be positive");
  const Index floor = (policy == SketchPolicy::fresh || basis == BasisMethod::svd_pcps) ? 3 * rank + 2
                                                                                       : 3 * rank;
  if (sketch_width < floor) {
    fail(ErrorKind::sketch_too_small, "s = " + std::to_string(sketch_width) + " below " +
                                          std::to_string(floor) + " for k = " + std::to_string(rank));
  }
}

TheoremBounds theorem_bounds(Index sketch_width, Index rank, int levels) {
  const double s = static_cast<double>(sketch_width);
  const double k = static_cast<double>(rank);
  if (rank < 1 || sketch_width < 3 * rank + 2) {
    fail(ErrorKind::sketch_too_small, "theorem_bounds needs s >= 3k + 2");
  }
  if (levels < 1) fail(ErrorKind::invalid_argument, "theorem_bounds needs L >= 1");
  const double e = std::numbers::e;
  const double g = 1.0 + 2.0 * e * (s - 2 * k) / std::sqrt((s - 3 * k) * (s - 3 * k) - 1.0);
  TheoremBounds b;
  b.gamma_r = g * g;
  b.gamma_c = b.gamma_r;
  b.gamma_d = 2 * k / (s - 2 * k - 1);
  b.factor = (b.gamma_r + b.gamma_c) * (1 + b.gamma_d) * levels;
  return b;
}

LevelFactors factors_from_sketches(const SketchBundle& bundle, Index rank, BasisMethod basis,
                                   ExecPolicy exec) {
  const Index n = bundle.block_count();
  const Index m = bundle.block_rows;
  std::vector<DenseMatrix> u(static_cast<std::size_t>(n));
  std::vector<DenseMatrix> v(static_cast<std::size_t>(n));
  std::vector<DenseMatrix> d(static_cast<std::size_t>(n));
  auto extract = [&](const DenseMatrix& s) {
    return basis == BasisMethod::svd_pcps ? pcps_basis(s, rank) : pivoted_qr_basis(s, rank);
  };
  for_each_block(exec, n, [&](std::int64_t i) {
    const auto ui = static_cast<std::size_t>(i);
    u[ui] = extract(block_nullify(bundle.omega, bundle.y, m, i).sketch);
    v[ui] = extract(block_nullify(bundle.psi, bundle.z, m, i).sketch);
    d[ui] = recover_diagonal(u[ui], v[ui], bundle.y_tilde.middleRows(i * m, m),
                             bundle.omega_tilde.middleRows(i * m, m), bundle.z_tilde.middleRows(i * m, m),
                             bundle.psi_tilde.middleRows(i * m, m));
  });
  return LevelFactors{BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                      BlockDiagonalDense(std::move(d))};
}

namespace {

void check_oracle(const MatvecOracle& oracle, const MatvecConfig& cfg) {
  cfg.validate();
  const Index n = (Index{1} << (cfg.levels + 1)) * cfg.rank;
  if (oracle.dim() != n) {
    fail(ErrorKind::dimension_mismatch, "oracle dimension " + std::to_string(oracle.dim()) +
                                            ", HSS(" + std::to_string(cfg.levels) + "," +
                                            std::to_string(cfg.rank) + ") needs " + std::to_string(n));
  }
}

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Fills y, y_tilde, z, z_tilde for the compressed matrix defined by `stack`,
// one forward and one transpose call of width 2s each.
void sketch_level(const LevelStack& stack, const MatvecOracle& oracle, SketchBundle& b, ExecPolicy exec) {
  const Index s = b.width();
  DenseMatrix fwd = level_apply(stack, oracle, hcat(b.omega, b.omega_tilde), exec);
  DenseMatrix bwd = level_apply_transpose(stack, oracle, hcat(b.psi, b.psi_tilde), exec);
  b.y = fwd.leftCols(s);
  b.y_tilde = fwd.rightCols(s);
  b.z = bwd.leftCols(s);
  b.z_tilde = bwd.rightCols(s);
}

DenseMatrix probe_root(const LevelStack& stack, const MatvecOracle& oracle, ExecPolicy exec) {
  const Index m = 2 * stack.rank();
  return level_apply(stack, oracle, DenseMatrix::Identity(m, m), exec);
}

QueryCount minus(const QueryCount& a, const QueryCount& b) {
  return {a.forward - b.forward, a.transpose - b.transpose};
}

// Replaces the level-(l+1) sketches by the matching sketches of A^(l).
void compress_bundle(SketchBundle& b, const LevelFactors& f, ExecPolicy exec) {
  auto fwd = [&](DenseMatrix& y, DenseMatrix& omega) {
    y = f.u.apply_transpose(y - f.d.apply(omega, exec), exec);
    omega = f.v.apply_transpose(omega, exec);
  };
  auto bwd = [&](DenseMatrix& z, DenseMatrix& psi) {
    z = f.v.apply_transpose(z - f.d.apply_transpose(psi, exec), exec);
    psi = f.u.apply_transpose(psi, exec);
  };
  fwd(b.y, b.omega);
  fwd(b.y_tilde, b.omega_tilde);
  bwd(b.z, b.psi);
  bwd(b.z_tilde, b.psi_tilde);
}

}  // namespace

MatvecResult hss_from_matvecs_fresh(const MatvecOracle& oracle, const MatvecConfig& cfg) {
  check_oracle(oracle, cfg);
  CountingOracle counted(oracle);
  const RngStream base(cfg.seed);
  LevelStack stack(cfg.levels, cfg.rank);
  for (int l = cfg.levels; l >= 1; --l) {
    SketchBundle bundle = sample_bundle(base, l, Index{1} << l, 2 * cfg.rank, cfg.sketch_width);
    sketch_level(stack, counted, bundle, cfg.exec);
    stack.push(factors_from_sketches(bundle, cfg.rank, cfg.basis, cfg.exec));
  }
  const QueryCount sketched = counted.count();
  DenseMatrix root = probe_root(stack, counted, cfg.exec);
  return MatvecResult{stack.finish(std::move(root)), sketched, minus(counted.count(), sketched)};
}

MatvecResult hss_from_matvecs_reused(const MatvecOracle& oracle, const MatvecConfig& cfg) {
  check_oracle(oracle, cfg);
  CountingOracle counted(oracle);
  const RngStream base(cfg.seed);
  LevelStack stack(cfg.levels, cfg.rank);
  SketchBundle bundle =
      sample_bundle(base, cfg.levels, Index{1} << cfg.levels, 2 * cfg.rank, cfg.sketch_width);
  sketch_level(stack, counted, bundle, cfg.exec);
  const QueryCount sketched = counted.count();
  for (int l = cfg.levels; l >= 1; --l) {
    if (l < cfg.levels) compress_bundle(bundle, stack.level(l + 1), cfg.exec);
    stack.push(factors_from_sketches(bundle, cfg.rank, cfg.basis, cfg.exec));
  }
  DenseMatrix root = probe_root(stack, counted, cfg.exec);
  return MatvecResult{stack.finish(std::move(root)), sketched, minus(counted.count(), sketched)};
}

MatvecResult hss_from_matvecs(const MatvecOracle& oracle, const MatvecConfig& cfg) {
  return cfg.policy == SketchPolicy::fresh ? hss_from_matvecs_fresh(oracle, cfg)
                                           : hss_from_matvecs_reused(oracle, cfg);
}

}  // namespace hssmv
