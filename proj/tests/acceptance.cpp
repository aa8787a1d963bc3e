// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hssmv/blr2.hpp"
#include "hssmv/error.hpp"
#include "hssmv/experiment.hpp"
#include "hssmv/greedy_explicit.hpp"
#include "hssmv/matvec_hss.hpp"
#include "hssmv/oracle.hpp"
#include "hssmv/serialize.hpp"
#include "hssmv/sketch.hpp"
#include "hssmv/testbed.hpp"
#include "montecarlo.hpp"

using namespace hssmv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= limit_s;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs,
              limit_s, in_time ? "" : ", too slow");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs(const DenseMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

DenseMatrix random_block_diagonal(Index count, Index rows, Index cols, const RngStream& base) {
  DenseMatrix out = DenseMatrix::Zero(count * rows, count * cols);
  for (Index i = 0; i < count; ++i) out.block(i * rows, i * cols, rows, cols) = gaussian(rows, cols, base.child(1, i, StreamRole::test));
  return out;
}

MatvecConfig config(int levels, Index k, Index s, std::uint64_t seed, SketchPolicy policy) {
  MatvecConfig c;
  c.levels = levels;
  c.rank = k;
  c.sketch_width = s;
  c.seed = seed;
  c.policy = policy;
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome exact_recovery() {
  int ok = 0, total = 0;
  double worst = 0;
  for (auto [levels, k] : {std::pair{3, Index{2}}, std::pair{4, Index{4}}}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DenseMatrix a = random_hss_matrix(levels, k, 1000 + seed);
      const DenseOracle op(a);
      const double e = frobenius_error(a, hss_from_matvecs_fresh(op, config(levels, k, 3 * k + 2, seed, SketchPolicy::fresh)).factorization);
      worst = std::max(worst, e);
      ok += e <= 1e-9;
      ++total;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " seeds, worst rel err " + fmt("%.2e", worst) + " <= 1e-9"};
}

// Y_i P_i = r_i(A^(l+1)) G_i at every level, with Y produced by the level recursion.
Outcome nullification_identity() {
  const int levels = 4;
  const Index k = 4, s = 14;
  const DenseMatrix a = gaussian(128, 128, RngStream(7).child(0, 0, StreamRole::matrix));
  const DenseOracle op(a);
  const auto t = greedy_hss_explicit(a, levels, k);
  LevelStack stack(levels, k);
  DenseMatrix compressed = a;
  double worst = 0;
  int blocks = 0;
  for (int l = levels; l >= 1; --l) {
    const BlockPartition part(l, k);
    const Index n = part.block_count(), m = part.block_size();
    const DenseMatrix omega = sample_sketch(RngStream(11), l, n, m, s, StreamRole::omega);
    const DenseMatrix y = level_apply(stack, op, omega);
    for (Index i = 0; i < n; ++i) {
      const Nullified nl = block_nullify(omega, y, m, i);
      DenseMatrix rest(omega.rows() - m, s);
      rest << omega.topRows(i * m), omega.bottomRows(omega.rows() - (i + 1) * m);
      worst = std::max(worst, max_abs(nl.sketch - hss_block_row(compressed, part, i) * (rest * nl.p)));
      ++blocks;
    }
    const auto& f = t.level(l);
    stack.push(f);
    compressed = f.u.dense().transpose() * (compressed - f.d.dense()) * f.v.dense();
  }
  return {worst <= 1e-11, std::to_string(blocks) + " blocks over 4 levels, max discrepancy " + fmt("%.2e", worst) + " <= 1e-11"};
}

Outcome hard_gap() {
  const DenseMatrix a = hard_instance(4, 0.1);
  const double greedy2 = (a - reconstruct_dense(greedy_hss_explicit(a, 4, 1))).squaredNorm();
  const double ref2 = (a - hard_instance_reference(4)).squaredNorm();
  const bool pass = greedy2 >= 448.0 && ref2 <= 259.2 && greedy2 / ref2 >= 1.72;
  return {pass, "greedy err^2 " + fmt("%.4f", greedy2) + " >= 448, B* err^2 " + fmt("%.4f", ref2) + " <= 259.2, ratio " +
                    fmt("%.4f", greedy2 / ref2) + " >= 1.72"};
}

Outcome hard_optimal() {
  const double e = frobenius_error(hard_instance(4, 0.1), hard_instance_reference(4));
  return {e >= 0.70 && e <= 0.72, "B* rel err " + fmt("%.6f", e) + " in [0.70, 0.72]"};
}

Outcome bound_compliance() {
  const DenseOracle op(hard_instance(4, 0.1));
  bool pass = true;
  std::string detail;
  for (Index s : {5, 7, 9}) {
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto r = hss_from_matvecs_fresh(op, config(4, 1, s, 500 + seed, SketchPolicy::fresh));
      sum += (op.matrix() - reconstruct_dense(r.factorization)).squaredNorm();
    }
    const double bound = theorem_bounds(s, 1, 4).factor * 259.2;
    pass = pass && sum / 20 <= bound;
    detail += "s=" + std::to_string(s) + ": mean err^2 " + fmt("%.2f", sum / 20) + " <= " + fmt("%.1f", bound) + (s < 9 ? "; " : "");
  }
  return {pass, detail};
}

Outcome monte_carlo() {
  bool pass = true;
  std::string detail;
  for (auto [k, q] : {std::pair<Index, Index>{2, 4}, {5, 8}, {8, 26}}) {
    const auto e = testing::pcps_envelope(k, q, 200, 300 + static_cast<std::uint64_t>(k));
    pass = pass && e.mean <= e.bound;
    detail += "pcps(" + std::to_string(k) + "," + std::to_string(q) + ") " + fmt("%.3f", e.mean) + " <= " + fmt("%.2f", e.bound) + "; ";
  }
  for (auto [k, s] : {std::pair<Index, Index>{2, 8}, {4, 12}}) {
    const auto e = testing::diagonal_envelope(k, s, 300, 400 + static_cast<std::uint64_t>(k));
    pass = pass && e.mean <= e.bound;
    detail += "diag(" + std::to_string(k) + "," + std::to_string(s) + ") " + fmt("%.3f", e.mean) + " <= " + fmt("%.3f", e.bound) + (k == 4 ? "" : "; ");
  }
  return {pass, detail};
}

Outcome query_accounting() {
  bool pass = true;
  std::string detail;
  for (auto [levels, k, s] : {std::tuple<int, Index, Index>{4, 4, 14}, {3, 2, 9}, {5, 1, 7}}) {
    const DenseOracle inner(random_hss_matrix(levels, k, 3));
    CountingOracle op(inner);
    const auto fresh = hss_from_matvecs(op, config(levels, k, s, 1, SketchPolicy::fresh));
    const std::uint64_t fq = op.count().total();
    op.reset();
    const auto reused = hss_from_matvecs(op, config(levels, k, s, 1, SketchPolicy::reused));
    const std::uint64_t rq = op.count().total();
    const auto want_f = static_cast<std::uint64_t>(4 * s * levels + 2 * k);
    const auto want_r = static_cast<std::uint64_t>(4 * s + 2 * k);
    pass = pass && fq == want_f && rq == want_r && fresh.root_queries.total() == static_cast<std::uint64_t>(2 * k) &&
           reused.root_queries.total() == static_cast<std::uint64_t>(2 * k);
    detail += "(L,k,s)=(" + std::to_string(levels) + "," + std::to_string(k) + "," + std::to_string(s) + ") fresh " +
              std::to_string(fq) + "/" + std::to_string(want_f) + " reused " + std::to_string(rq) + "/" + std::to_string(want_r) +
              (levels == 5 ? "" : "; ");
  }
  return {pass, detail};
}

Outcome desk_scale_trends() {
  ExperimentConfig cfg;
  cfg.matrix = "banded:n=1024,b=17,seed=1";
  cfg.levels = 6;
  cfg.rank = 8;
  cfg.algorithms = {"fresh", "reused-svd", "reused-qr"};
  cfg.widths = {26, 34, 42};
  cfg.trials = 10;
  cfg.seed = 42;
  std::map<std::pair<std::string, Index>, std::vector<double>> cells;
  for (const auto& r : run_experiment(cfg)) cells[{r.algorithm, r.sketch_width}].push_back(r.rel_error);
  bool monotone = true, dominance = true;
  std::string detail;
  for (const auto& algo : cfg.algorithms) {
    double prev = 1e300;
    detail += algo + " [";
    for (Index s : cfg.widths) {
      const double m = median(cells[{algo, s}]);
      monotone = monotone && m <= prev;
      prev = m;
      detail += fmt("%.4f", m) + (s == 42 ? "" : " ");
    }
    detail += "] ";
  }
  for (Index s : cfg.widths) dominance = dominance && median(cells[{"fresh", s}]) <= median(cells[{"reused-svd", s}]);
  detail += std::string("monotone ") + (monotone ? "yes" : "no") + ", fresh <= reused-svd " + (dominance ? "yes" : "no");
  return {monotone && dominance, detail};
}

Outcome closure() {
  int ok_compress = 0, ok_congruence = 0;
  for (int t = 0; t < 50; ++t) {
    const RngStream base(9000 + static_cast<std::uint64_t>(t));
    const int level = 2 + t % 3;
    const Index k = 1 + t % 3;
    const Index n = Index{1} << level;
    const DenseMatrix b = random_hss_matrix(level, k, 9000 + static_cast<std::uint64_t>(t));
    const DenseMatrix r = random_block_diagonal(n, 2 * k, k, base.child(0, 0, StreamRole::factor_u));
    const DenseMatrix l = random_block_diagonal(n, 2 * k, k, base.child(0, 0, StreamRole::factor_v));
    const DenseMatrix d = random_block_diagonal(n, 2 * k, 2 * k, base.child(0, 0, StreamRole::factor_d));
    ok_compress += validate_hss_ranks(r.transpose() * (b - d) * l, level - 1, k, 1e-10);
    const DenseMatrix r2 = random_block_diagonal(n, 2 * k, 2 * k, base.child(0, 1, StreamRole::factor_u));
    const DenseMatrix l2 = random_block_diagonal(n, 2 * k, 2 * k, base.child(0, 1, StreamRole::factor_v));
    ok_congruence += validate_hss_ranks(r2.transpose() * b * l2 + d, level, k, 1e-10);
  }
  return {ok_compress == 50 && ok_congruence == 50, "R^T(B-D)L: " + std::to_string(ok_compress) + "/50, R^T B L + D: " +
                                                         std::to_string(ok_congruence) + "/50 at tol 1e-10"};
}

Outcome blr2_checks() {
  double worst_exact = 0;
  const std::vector<BLR2Pattern> patterns{BLR2Pattern::diagonal(16, 4), BLR2Pattern::tridiagonal(16, 4),
                                          BLR2Pattern::tridiagonal(8, 6),
                                          BLR2Pattern(6, 5, {{0, 0}, {0, 5}, {5, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}})};
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Index k = 2;
      const DenseMatrix a = blr2_reconstruct(random_blr2(patterns[p], k, 100 * p + seed));
      const DenseOracle op(a);
      const auto r = blr2_from_matvecs(op, patterns[p], k, patterns[p].min_sketch_width(k), seed);
      worst_exact = std::max(worst_exact, frobenius_error(a, blr2_reconstruct(r.factorization)));
    }
  }
  double worst_sss = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const int levels = 3 + static_cast<int>(seed % 2);
    const Index k = 2 + static_cast<Index>(seed % 2);
    const Index n = (Index{1} << (levels + 1)) * k;
    const DenseOracle op(gaussian(n, n, RngStream(seed).child(0, 0, StreamRole::matrix)));
    const Index s = 3 * k + 3;
    const auto hss = hss_from_matvecs_fresh(op, config(levels, k, s, 77 + seed, SketchPolicy::fresh));
    const auto r = blr2_from_matvecs(op, BLR2Pattern::diagonal(Index{1} << levels, 2 * k), k, s, 77 + seed,
                                     {ExecPolicy::parallel, levels});
    const auto& f = hss.factorization.level(levels);
    for (Index i = 0; i < f.u.block_count(); ++i) {
      worst_sss = std::max({worst_sss, max_abs(r.factorization.u.block(i) - f.u.block(i)),
                            max_abs(r.factorization.v.block(i) - f.v.block(i)),
                            max_abs(r.factorization.d[static_cast<std::size_t>(i)] - f.d.block(i))});
    }
  }
  return {worst_exact <= 1e-9 && worst_sss <= 1e-10,
          "exact recovery worst rel err " + fmt("%.2e", worst_exact) + " <= 1e-9, SSS step max diff " + fmt("%.2e", worst_sss) + " <= 1e-10"};
}

std::string corruption_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    (void)deserialize(bytes);
  } catch (const hssmv::Error& e) {
    return std::string(to_string(e.kind()));
  }
  return "accepted";
}

Outcome serialization() {
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = random_telescoping(1 + static_cast<int>(seed % 5), 1 + static_cast<Index>(seed % 4), seed);
    const auto bytes = serialize(t);
    exact += serialize(deserialize(bytes)) == bytes;
  }
  const auto good = serialize(random_telescoping(2, 2, 1));
  auto magic = good, version = good, header = good, trunc = good, trailing = good;
  magic[0] = 'X';
  version[4] = 9;
  std::fill(header.begin() + 8, header.begin() + 12, 0);
  trunc.resize(trunc.size() - 8);
  trailing.push_back(0);
  const std::vector<std::string> kinds{corruption_kind(magic), corruption_kind(version), corruption_kind(header), corruption_kind(trunc), corruption_kind(trailing)};
  const std::vector<std::string> want{"bad magic", "version mismatch", "bad header", "truncated payload", "trailing bytes"};
  std::string detail = std::to_string(exact) + "/20 bit-exact; corruptions ->";
  for (const auto& k : kinds) detail += " [" + k + "]";
  return {exact == 20 && kinds == want, detail};
}

}  // namespace

int main() {
  criterion(1, "exact recovery, fresh sketches", 10, exact_recovery);
  criterion(2, "block nullification identity", 1, nullification_identity);
  criterion(3, "hard-instance quasi-optimality gap", 1, hard_gap);
  criterion(4, "hard-instance optimal relative error", 1, hard_optimal);
  criterion(5, "expected-error bound on the hard instance", 30, bound_compliance);
  criterion(6, "basis and diagonal Monte-Carlo envelopes", 60, monte_carlo);
  criterion(7, "query accounting", 5, query_accounting);
  criterion(8, "desk-scale banded-inverse trends", 300, desk_scale_trends);
  criterion(9, "closure properties", 30, closure);
  criterion(10, "BLR2 recovery and SSS specialization", 30, blr2_checks);
  criterion(11, "serialization", 1, serialization);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
