#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hssmv/oracle.hpp"

namespace hssmv {

/// A test problem: an operator plus, when cheap enough, its dense matrix for
/// error measurement.
struct Problem {
  std::string name;
  std::unique_ptr<MatvecOracle> oracle;
  DenseMatrix dense;
};

/// Builds a problem from a spec such as "banded:n=1024,b=17,seed=1",
/// "grid:rows=64", "bie:n=1920,a=0.3,w=5", "hard:L=4,delta=0.1",
/// "hss:L=3,k=2,seed=7", or a path to a DMAT file.
Problem make_problem(const std::string& spec);

/// Flat key=value configuration; '#' starts a comment.
struct ExperimentConfig {
  std::string matrix;  // problem spec as accepted by make_problem
  int levels = 1;
  Index rank = 1;
  std::vector<std::string> algorithms;
  std::vector<Index> widths;
  int trials = 1;
  std::uint64_t seed = 0;
  bool wall_clock = false;
};

/// Parses the config text. Errors carry kind config_error and name the line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ExperimentRecord {
  std::string matrix;
  std::string algorithm;
  int levels = 0;
  Index rank = 0;
  Index sketch_width = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t forward_queries = 0;
  std::uint64_t transpose_queries = 0;
  double rel_error = 0;
  double wall_ms = 0;
};

inline constexpr const char* kCsvHeader =
    "matrix,algorithm,L,k,s,trial,seed,fwd_q,tr_q,rel_err,wall_ms";

/// Algorithms: fresh, reused-svd, reused-qr, explicit, bstar. One record per
/// (algorithm, s, trial), sorted by algorithm, then s, then trial.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

/// Seed of trial t derived from the base seed.
std::uint64_t trial_seed(std::uint64_t base, int trial);

}  // namespace hssmv
