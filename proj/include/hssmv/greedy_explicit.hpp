#pragma once

#include "hssmv/parallel.hpp"
#include "hssmv/structures.hpp"

namespace hssmv {

struct SSSStep {
  LevelFactors factors;
  /// U^T (A - D) V, the 2^l k square matrix handed to the next level.
  DenseMatrix next;
};

/// One level of the greedy builder with explicit access: U_i and V_i are the
/// optimal rank-k subspaces of r_i(A) and c_i(A), D_i = A_ii.
SSSStep sss_step_explicit(const DenseMatrix& a, int level, Index rank,
                          ExecPolicy exec = ExecPolicy::parallel);

/// Greedy HSS(L, k) approximation of a dense matrix; O(N^2 k) work.
TelescopingFactorization greedy_hss_explicit(const DenseMatrix& a, int levels, Index rank,
                                             ExecPolicy exec = ExecPolicy::parallel);

}  // namespace hssmv
