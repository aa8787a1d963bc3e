#pragma once

#include <cstdint>
#include <string_view>

#include "hssmv/oracle.hpp"
#include "hssmv/parallel.hpp"
#include "hssmv/sketch.hpp"
#include "hssmv/structures.hpp"

namespace hssmv {

enum class BasisMethod { svd_pcps, pivoted_qr };
enum class SketchPolicy { fresh, reused };

struct MatvecConfig {
  int levels = 1;
  Index rank = 1;
  Index sketch_width = 5;
  std::uint64_t seed = 0;
  BasisMethod basis = BasisMethod::svd_pcps;
  SketchPolicy policy = SketchPolicy::fresh;
  ExecPolicy exec = ExecPolicy::parallel;

  /// Throws sketch_too_small / invalid_argument on a bad combination.
  void validate() const;
};

/// Quasi-optimality constants of the fresh-sketch builder.
struct TheoremBounds {
  double gamma_r = 0;
  double gamma_c = 0;
  double gamma_d = 0;
  /// (gamma_r + gamma_c)(1 + gamma_d) L
  double factor = 0;
};

TheoremBounds theorem_bounds(Index sketch_width, Index rank, int levels);

struct MatvecResult {
  TelescopingFactorization factorization;
  /// Queries spent on the level sketches (4 s per sketched level).
  QueryCount sketch_queries;
  /// Queries spent probing D0 = A^(1) I_2k.
  QueryCount root_queries;

  QueryCount total_queries() const {
    return {sketch_queries.forward + root_queries.forward,
            sketch_queries.transpose + root_queries.transpose};
  }
};

/// Greedy HSS approximation with independent Gaussian sketches at every
/// level; 4 s L + 2k queries.
MatvecResult hss_from_matvecs_fresh(const MatvecOracle& oracle, const MatvecConfig& cfg);

/// Baseline that sketches A once and compresses the same sketches through the
/// recovered factors at every lower level; 4 s + 2k queries.
MatvecResult hss_from_matvecs_reused(const MatvecOracle& oracle, const MatvecConfig& cfg);

/// Dispatches on cfg.policy.
MatvecResult hss_from_matvecs(const MatvecOracle& oracle, const MatvecConfig& cfg);

/// Factors of one level computed from its sketch bundle: nullified PCPS (or
/// pivoted QR) bases and diagonal recovery from the tilde sketches.
LevelFactors factors_from_sketches(const SketchBundle& bundle, Index rank,
                                   BasisMethod basis, ExecPolicy exec);

std::string_view to_string(BasisMethod m);
std::string_view to_string(SketchPolicy p);

}  // namespace hssmv
