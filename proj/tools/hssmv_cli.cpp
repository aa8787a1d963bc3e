// hssmv: generate test matrices, build rank-structured approximations, run
// parameter sweeps and check stored factorizations.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hssmv/blr2.hpp"
#include "hssmv/error.hpp"
#include "hssmv/experiment.hpp"
#include "hssmv/greedy_explicit.hpp"
#include "hssmv/matrix_io.hpp"
#include "hssmv/matvec_hss.hpp"
#include "hssmv/serialize.hpp"
#include "hssmv/testbed.hpp"

namespace {

struct ApproxArgs {
  std::string algorithm;
  int levels = 1;
  hssmv::Index rank = 1;
  hssmv::Index width = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  std::string pattern = "diag";
  hssmv::Index block_size = 0;
  bool serial = false;
};

int run_approx(const ApproxArgs& a) {
  using namespace hssmv;
  Problem problem = make_problem(a.input);
  const ExecPolicy exec = a.serial ? ExecPolicy::serial : ExecPolicy::parallel;

  if (a.algorithm == "blr2") {
    const Index m = a.block_size > 0 ? a.block_size : 2 * a.rank;
    if (problem.oracle->dim() % m != 0) fail(ErrorKind::dimension_mismatch, "block size does not divide N");
    const BLR2Pattern pattern = BLR2Pattern::parse(a.pattern, problem.oracle->dim() / m, m);
    const Index s = a.width > 0 ? a.width : 2 * pattern.min_sketch_width(a.rank);
    Blr2Result res = blr2_from_matvecs(*problem.oracle, pattern, a.rank, s, a.seed, {exec, 0});
    const DenseMatrix b = blr2_reconstruct(res.factorization);
    std::printf("algorithm=blr2 N=%lld b=%lld m=%lld k=%lld s=%lld s_max=%lld\n",
                static_cast<long long>(pattern.dim()), static_cast<long long>(pattern.block_count()),
                static_cast<long long>(m), static_cast<long long>(a.rank), static_cast<long long>(s),
                static_cast<long long>(pattern.s_max()));
    std::printf("sketch_queries=%llu coupling_queries=%llu\n",
                static_cast<unsigned long long>(res.sketch_queries.total()),
                static_cast<unsigned long long>(res.coupling_queries.total()));
    std::printf("rel_err=%.17g\n", frobenius_error(problem.dense, b));
    if (!a.output.empty()) write_matrix(a.output, b);
    return 0;
  }

  TelescopingFactorization t = [&] {
    if (a.algorithm == "explicit") return greedy_hss_explicit(problem.dense, a.levels, a.rank, exec);
    MatvecConfig cfg;
    cfg.levels = a.levels;
    cfg.rank = a.rank;
    cfg.sketch_width = a.width > 0 ? a.width : 3 * a.rank + 2;
    cfg.seed = a.seed;
    cfg.exec = exec;
    if (a.algorithm == "fresh") {
      cfg.policy = SketchPolicy::fresh;
    } else if (a.algorithm == "reused-svd" || a.algorithm == "reused-qr") {
      cfg.policy = SketchPolicy::reused;
      cfg.basis = a.algorithm == "reused-qr" ? BasisMethod::pivoted_qr : BasisMethod::svd_pcps;
    } else {
      fail(ErrorKind::invalid_argument, "unknown algorithm " + a.algorithm);
    }
    MatvecResult res = hss_from_matvecs(*problem.oracle, cfg);
    std::printf("sketch_queries=%llu root_queries=%llu total_queries=%llu\n",
                static_cast<unsigned long long>(res.sketch_queries.total()),
                static_cast<unsigned long long>(res.root_queries.total()),
                static_cast<unsigned long long>(res.total_queries().total()));
    return std::move(res.factorization);
  }();
  std::printf("algorithm=%s N=%lld L=%d k=%lld\n", a.algorithm.c_str(), static_cast<long long>(t.dim()),
              t.levels(), static_cast<long long>(t.rank()));
  std::printf("rel_err=%.17g\n", frobenius_error(problem.dense, t));
  if (!a.output.empty()) write_factorization(a.output, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-structured (HSS, SSS, BLR2) matrix approximation from matvecs"};
  app.require_subcommand(1);

  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "Write a test matrix as a DMAT file");
  gen->add_option("matrix", gen_spec,
                  "banded:n=,b=,seed= | grid:rows= | bie:n=,a=,w= | hard:L=,delta= | hss:L=,k=,seed=")
      ->required();
  gen->add_option("--out", gen_out, "Output DMAT path")->required();

  ApproxArgs ax;
  auto* approx = app.add_subcommand("approx", "Build an approximation and report its error");
  approx->add_option("algorithm", ax.algorithm, "fresh | reused-svd | reused-qr | explicit | blr2")
      ->required()
      ->check(CLI::IsMember({"fresh", "reused-svd", "reused-qr", "explicit", "blr2"}));
  approx->add_option("--L", ax.levels, "Number of levels");
  approx->add_option("--k", ax.rank, "Rank")->required();
  approx->add_option("--s", ax.width, "Sketch width (default 3k+2, or 2(s_max m + k + 2) for blr2)");
  approx->add_option("--seed", ax.seed, "Random seed");
  approx->add_option("--in", ax.input, "DMAT file or matrix spec")->required();
  approx->add_option("--out", ax.output, "Output: HSSF container (DMAT reconstruction for blr2)");
  approx->add_option("--pattern", ax.pattern, "blr2 pattern: diag | tridiag | pair-list file");
  approx->add_option("--m", ax.block_size, "blr2 block size (default 2k)");
  approx->add_flag("--serial", ax.serial, "Use the serial reference path");

  std::string cfg_path, csv_path;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", cfg_path, "key=value config file")->required();
  sweep->add_option("--csv", csv_path, "Output CSV path (stdout if omitted)");

  std::string val_in, val_against;
  auto* validate = app.add_subcommand("validate", "Compare a stored HSSF factorization with a matrix");
  validate->add_option("--in", val_in, "HSSF container")->required();
  validate->add_option("--against", val_against, "DMAT file or matrix spec")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      hssmv::Problem p = hssmv::make_problem(gen_spec);
      hssmv::write_matrix(gen_out, p.dense);
      std::printf("wrote %s (%lldx%lld)\n", gen_out.c_str(), static_cast<long long>(p.dense.rows()),
                  static_cast<long long>(p.dense.cols()));
      return 0;
    }
    if (*approx) return run_approx(ax);
    if (*sweep) {
      const auto records = hssmv::run_experiment(hssmv::load_config(cfg_path));
      if (csv_path.empty()) {
        hssmv::write_csv(std::cout, records);
      } else {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) hssmv::fail(hssmv::ErrorKind::io_error, "cannot open " + csv_path);
        hssmv::write_csv(out, records);
      }
      return 0;
    }
    if (*validate) {
      const auto t = hssmv::read_factorization(val_in);
      hssmv::Problem p = hssmv::make_problem(val_against);
      std::printf("L=%d k=%lld N=%lld\n", t.levels(), static_cast<long long>(t.rank()),
                  static_cast<long long>(t.dim()));
      std::printf("rel_err=%.17g\n", hssmv::frobenius_error(p.dense, t));
      return 0;
    }
  } catch (const hssmv::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
