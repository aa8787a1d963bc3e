// Serial reference path vs OpenMP block-parallel path. Arg 0 = serial,
// arg 1 = parallel.
#include <benchmark/benchmark.h>

#include "hssmv/greedy_explicit.hpp"
#include "hssmv/matvec_hss.hpp"
#include "hssmv/structures.hpp"
#include "hssmv/testbed.hpp"

namespace {

hssmv::ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? hssmv::ExecPolicy::serial : hssmv::ExecPolicy::parallel;
}

void BM_SssStepExplicit(benchmark::State& state) {
  const hssmv::DenseMatrix a = hssmv::random_hss_matrix(5, 8, 11);
  for (auto _ : state) {
    auto step = hssmv::sss_step_explicit(a, 5, 8, policy(state));
    benchmark::DoNotOptimize(step.next.data());
  }
}
BENCHMARK(BM_SssStepExplicit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FreshBuilder(benchmark::State& state) {
  auto oracle = hssmv::banded_inverse_oracle(1024, 17, 3);
  hssmv::MatvecConfig cfg;
  cfg.levels = 6;
  cfg.rank = 8;
  cfg.sketch_width = 34;
  cfg.seed = 5;
  cfg.exec = policy(state);
  for (auto _ : state) {
    auto res = hssmv::hss_from_matvecs_fresh(*oracle, cfg);
    benchmark::DoNotOptimize(res.factorization.root().data());
  }
}
BENCHMARK(BM_FreshBuilder)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HssApply(benchmark::State& state) {
  const auto t = hssmv::random_telescoping(8, 8, 13);
  const hssmv::DenseMatrix x = hssmv::DenseMatrix::Ones(t.dim(), 16);
  for (auto _ : state) {
    auto y = hssmv::hss_apply(t, x, policy(state));
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_HssApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
