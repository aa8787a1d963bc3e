#include "hssmv/oracle.hpp"

#include <string>

#include "hssmv/error.hpp"

namespace hssmv {
namespace {

void check_operand(Index dim, const DenseMatrix& x, const char* who) {
  if (x.rows() != dim) {
    fail(ErrorKind::dimension_mismatch, std::string(who) + ": operand has " +
                                            std::to_string(x.rows()) + " rows, operator is " +
                                            std::to_string(dim));
  }
}

}  // namespace

DenseOracle::DenseOracle(DenseMatrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) fail(ErrorKind::dimension_mismatch, "DenseOracle needs a square matrix");
  require_finite(a_, "DenseOracle matrix");
}

DenseMatrix DenseOracle::apply(const DenseMatrix& x) const {
  check_operand(dim(), x, "DenseOracle::apply");
  return a_ * x;
}

DenseMatrix DenseOracle::apply_transpose(const DenseMatrix& x) const {
  check_operand(dim(), x, "DenseOracle::apply_transpose");
  return a_.transpose() * x;
}

FunctionOracle::FunctionOracle(Index dim, Apply apply, Apply apply_transpose, bool thread_safe)
    : dim_(dim), apply_(std::move(apply)), apply_transpose_(std::move(apply_transpose)),
      thread_safe_(thread_safe) {
  if (dim_ < 1) fail(ErrorKind::invalid_argument, "FunctionOracle dimension must be positive");
}

DenseMatrix FunctionOracle::apply(const DenseMatrix& x) const {
  check_operand(dim_, x, "FunctionOracle::apply");
  DenseMatrix y = apply_(x);
  if (y.rows() != dim_ || y.cols() != x.cols()) fail(ErrorKind::dimension_mismatch, "FunctionOracle::apply result");
  return y;
}

DenseMatrix FunctionOracle::apply_transpose(const DenseMatrix& x) const {
  check_operand(dim_, x, "FunctionOracle::apply_transpose");
  DenseMatrix y = apply_transpose_(x);
  if (y.rows() != dim_ || y.cols() != x.cols()) {
    fail(ErrorKind::dimension_mismatch, "FunctionOracle::apply_transpose result");
  }
  return y;
}

DenseMatrix CountingOracle::apply(const DenseMatrix& x) const {
  DenseMatrix y = inner_.apply(x);
  counter_.add_forward(static_cast<std::uint64_t>(x.cols()));
  return y;
}

DenseMatrix CountingOracle::apply_transpose(const DenseMatrix& x) const {
  DenseMatrix y = inner_.apply_transpose(x);
  counter_.add_transpose(static_cast<std::uint64_t>(x.cols()));
  return y;
}

void LevelStack::push(LevelFactors factors) {
  const int l = lowest_level() - 1;
  if (l < 1) fail(ErrorKind::invalid_argument, "LevelStack already holds every level");
  const Index n = Index{1} << l;
  if (factors.u.block_count() != n || factors.v.block_count() != n || factors.d.block_count() != n ||
      factors.u.block_rows() != 2 * rank_ || factors.u.block_cols() != rank_ ||
      factors.v.block_rows() != 2 * rank_ || factors.v.block_cols() != rank_ ||
      factors.d.block_rows() != 2 * rank_) {
    fail(ErrorKind::invalid_factor, "factors do not fit level " + std::to_string(l));
  }
  top_down_.push_back(std::move(factors));
}

const LevelFactors& LevelStack::level(int l) const {
  if (l < lowest_level() || l > levels_) {
    fail(ErrorKind::index_out_of_range, "level " + std::to_string(l) + " not recovered yet");
  }
  return top_down_[static_cast<std::size_t>(levels_ - l)];
}

TelescopingFactorization LevelStack::finish(DenseMatrix root) const {
  if (static_cast<int>(top_down_.size()) != levels_) {
    fail(ErrorKind::invalid_argument, "LevelStack::finish with missing levels");
  }
  return TelescopingFactorization(levels_, rank_, top_down_, std::move(root));
}

namespace {

DenseMatrix compressed_apply(const LevelStack& stack, const MatvecOracle& oracle, const DenseMatrix& x,
                             ExecPolicy exec, bool transpose) {
  const int low = stack.lowest_level();
  if (x.rows() != stack.active_dim()) {
    fail(ErrorKind::dimension_mismatch, "level_apply: operand has " + std::to_string(x.rows()) +
                                            " rows, A^(" + std::to_string(low) + ") is " +
                                            std::to_string(stack.active_dim()));
  }
  if (oracle.dim() != (Index{1} << (stack.levels() + 1)) * stack.rank()) {
    fail(ErrorKind::dimension_mismatch, "level_apply: oracle dimension does not match L and k");
  }
  // lifted[m - low] is the operand of A^(m+1), lifted through V^(low)..V^(m).
  std::vector<DenseMatrix> lifted;
  lifted.reserve(static_cast<std::size_t>(stack.levels() - low + 2));
  lifted.push_back(x);
  for (int m = low; m <= stack.levels(); ++m) {
    const auto& f = stack.level(m);
    const auto& right = transpose ? f.u : f.v;
    lifted.push_back(right.apply(lifted.back(), exec));
  }
  DenseMatrix w = transpose ? oracle.apply_transpose(lifted.back()) : oracle.apply(lifted.back());
  for (int m = stack.levels(); m >= low; --m) {
    const auto& f = stack.level(m);
    const auto& left = transpose ? f.v : f.u;
    const DenseMatrix& xm = lifted[static_cast<std::size_t>(m - low + 1)];
    w -= transpose ? f.d.apply_transpose(xm, exec) : f.d.apply(xm, exec);
    w = left.apply_transpose(w, exec);
  }
  return w;
}

}  // namespace

DenseMatrix level_apply(const LevelStack& stack, const MatvecOracle& oracle, const DenseMatrix& omega,
                        ExecPolicy exec) {
  return compressed_apply(stack, oracle, omega, exec, false);
}

DenseMatrix level_apply_transpose(const LevelStack& stack, const MatvecOracle& oracle,
                                  const DenseMatrix& psi, ExecPolicy exec) {
  return compressed_apply(stack, oracle, psi, exec, true);
}

DenseMatrix dense_from_oracle(const MatvecOracle& oracle) {
  return oracle.apply(DenseMatrix::Identity(oracle.dim(), oracle.dim()));
}

}  // namespace hssmv
