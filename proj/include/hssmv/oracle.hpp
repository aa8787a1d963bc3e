#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hssmv/structures.hpp"

namespace hssmv {

/// Black-box square operator available only through products with blocks of
/// vectors (one vector per column).
class MatvecOracle {
 public:
  virtual ~MatvecOracle() = default;

  virtual Index dim() const = 0;
  virtual DenseMatrix apply(const DenseMatrix& x) const = 0;
  virtual DenseMatrix apply_transpose(const DenseMatrix& x) const = 0;

  /// Whether apply/apply_transpose may be called concurrently.
  virtual bool thread_safe() const { return false; }
};

/// Wraps an explicit matrix.
class DenseOracle final : public MatvecOracle {
 public:
  explicit DenseOracle(DenseMatrix a);

  Index dim() const override { return a_.rows(); }
  DenseMatrix apply(const DenseMatrix& x) const override;
  DenseMatrix apply_transpose(const DenseMatrix& x) const override;
  bool thread_safe() const override { return true; }

  const DenseMatrix& matrix() const { return a_; }

 private:
  DenseMatrix a_;
};

/// Oracle backed by a pair of callables.
class FunctionOracle final : public MatvecOracle {
 public:
  using Apply = std::function<DenseMatrix(const DenseMatrix&)>;

  FunctionOracle(Index dim, Apply apply, Apply apply_transpose, bool thread_safe = false);

  Index dim() const override { return dim_; }
  DenseMatrix apply(const DenseMatrix& x) const override;
  DenseMatrix apply_transpose(const DenseMatrix& x) const override;
  bool thread_safe() const override { return thread_safe_; }

 private:
  Index dim_;
  Apply apply_;
  Apply apply_transpose_;
  bool thread_safe_;
};

/// Single-vector product counts; a width-s block counts as s.
struct QueryCount {
  std::uint64_t forward = 0;
  std::uint64_t transpose = 0;

  std::uint64_t total() const { return forward + transpose; }
  friend bool operator==(const QueryCount&, const QueryCount&) = default;
};

class QueryCounter {
 public:
  void add_forward(std::uint64_t n) { forward_.fetch_add(n, std::memory_order_relaxed); }
  void add_transpose(std::uint64_t n) { transpose_.fetch_add(n, std::memory_order_relaxed); }
  QueryCount snapshot() const { return {forward_.load(), transpose_.load()}; }
  void reset() {
    forward_.store(0);
    transpose_.store(0);
  }

 private:
  std::atomic<std::uint64_t> forward_{0};
  std::atomic<std::uint64_t> transpose_{0};
};

/// Forwards to another oracle and counts every single-vector product.
class CountingOracle final : public MatvecOracle {
 public:
  explicit CountingOracle(const MatvecOracle& inner) : inner_(inner) {}

  Index dim() const override { return inner_.dim(); }
  DenseMatrix apply(const DenseMatrix& x) const override;
  DenseMatrix apply_transpose(const DenseMatrix& x) const override;
  bool thread_safe() const override { return inner_.thread_safe(); }

  QueryCount count() const { return counter_.snapshot(); }
  void reset() { counter_.reset(); }

 private:
  const MatvecOracle& inner_;
  mutable QueryCounter counter_;
};

/// Factors recovered so far by a top-down builder: levels L, L-1, ...,
/// lowest_level(). Together with the oracle for A they define the compressed
/// matrix A^(lowest_level()) without ever forming it.
class LevelStack {
 public:
  LevelStack(int levels, Index rank) : levels_(levels), rank_(rank) {}

  int levels() const { return levels_; }
  Index rank() const { return rank_; }
  std::size_t size() const { return top_down_.size(); }
  bool empty() const { return top_down_.empty(); }

  /// Level of the most recently pushed factors (L + 1 when empty).
  int lowest_level() const { return levels_ + 1 - static_cast<int>(top_down_.size()); }
  /// Dimension of A^(lowest_level()).
  Index active_dim() const { return (Index{1} << lowest_level()) * rank_; }

  void push(LevelFactors factors);
  const LevelFactors& level(int l) const;
  const std::vector<LevelFactors>& top_down() const { return top_down_; }

  TelescopingFactorization finish(DenseMatrix root) const;

 private:
  int levels_;
  Index rank_;
  std::vector<LevelFactors> top_down_;
};

/// A^(l+1) * omega, where l + 1 = stack.lowest_level(), evaluated through
/// A^(m) X = U^(m)^T (A^(m+1) V^(m) X - D^(m) V^(m) X) down to one product
/// with A. Each column of omega costs exactly one forward query.
DenseMatrix level_apply(const LevelStack& stack, const MatvecOracle& oracle,
                        const DenseMatrix& omega, ExecPolicy exec = ExecPolicy::serial);

/// (A^(l+1))^T * psi; each column costs one transpose query.
DenseMatrix level_apply_transpose(const LevelStack& stack, const MatvecOracle& oracle,
                                  const DenseMatrix& psi, ExecPolicy exec = ExecPolicy::serial);

/// A * I by N forward probes.
DenseMatrix dense_from_oracle(const MatvecOracle& oracle);

}  // namespace hssmv
