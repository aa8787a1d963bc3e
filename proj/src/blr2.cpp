#include "hssmv/blr2.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hssmv/error.hpp"
#include "hssmv/kernels.hpp"
#include "hssmv/sketch.hpp"

namespace hssmv {

BLR2Pattern::BLR2Pattern(Index block_count, Index block_size, std::vector<std::pair<Index, Index>> pairs)
    : b_(block_count), m_(block_size), pairs_(std::move(pairs)) {
  if (b_ < 1 || m_ < 1) fail(ErrorKind::invalid_argument, "BLR2 pattern needs b, m >= 1");
  for (const auto& [i, j] : pairs_) {
    if (i < 0 || i >= b_ || j < 0 || j >= b_) {
      fail(ErrorKind::index_out_of_range, "pattern pair (" + std::to_string(i + 1) + ", " +
                                              std::to_string(j + 1) + ") outside " +
                                              std::to_string(b_) + " blocks");
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  rows_.assign(static_cast<std::size_t>(b_), {});
  cols_.assign(static_cast<std::size_t>(b_), {});
  for (const auto& [i, j] : pairs_) {
    rows_[static_cast<std::size_t>(i)].push_back(j);
    cols_[static_cast<std::size_t>(j)].push_back(i);
  }
  for (Index i = 0; i < b_; ++i) {
    s_max_ = std::max({s_max_, static_cast<Index>(row_set(i).size()), static_cast<Index>(col_set(i).size())});
  }
}

BLR2Pattern BLR2Pattern::diagonal(Index block_count, Index block_size) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < block_count; ++i) pairs.emplace_back(i, i);
  return BLR2Pattern(block_count, block_size, std::move(pairs));
}

BLR2Pattern BLR2Pattern::tridiagonal(Index block_count, Index block_size) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < block_count; ++i) {
    for (Index j = std::max<Index>(0, i - 1); j <= std::min(block_count - 1, i + 1); ++j) pairs.emplace_back(i, j);
  }
  return BLR2Pattern(block_count, block_size, std::move(pairs));
}

BLR2Pattern BLR2Pattern::from_file(const std::string& path, Index block_count, Index block_size) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io_error, "cannot open pattern file " + path);
  std::vector<std::pair<Index, Index>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long i, j;
    if (!(ss >> i)) continue;
    std::string rest;
    if (!(ss >> j) || (ss >> rest)) {
      fail(ErrorKind::config_error, path + ":" + std::to_string(lineno) + ": expected \"i j\"");
    }
    if (i < 1 || j < 1 || i > block_count || j > block_count) {
      fail(ErrorKind::index_out_of_range, path + ":" + std::to_string(lineno) + ": pair outside 1.." +
                                              std::to_string(block_count));
    }
    pairs.emplace_back(i - 1, j - 1);
  }
  return BLR2Pattern(block_count, block_size, std::move(pairs));
}

BLR2Pattern BLR2Pattern::parse(const std::string& spec, Index block_count, Index block_size) {
  if (spec == "diag") return diagonal(block_count, block_size);
  if (spec == "tridiag") return tridiagonal(block_count, block_size);
  return from_file(spec, block_count, block_size);
}

bool BLR2Pattern::contains(Index i, Index j) const {
  if (i < 0 || i >= b_) return false;
  const auto& r = row_set(i);
  return std::binary_search(r.begin(), r.end(), j);
}

std::vector<Index> BLR2Pattern::row_complement(Index i) const {
  std::vector<Index> out;
  for (Index j = 0; j < b_; ++j) {
    if (!contains(i, j)) out.push_back(j);
  }
  return out;
}

std::vector<Index> BLR2Pattern::col_complement(Index j) const {
  std::vector<Index> out;
  for (Index i = 0; i < b_; ++i) {
    if (!contains(i, j)) out.push_back(i);
  }
  return out;
}

DenseMatrix BLR2Factorization::remainder_dense() const {
  const Index m = pattern.block_size();
  DenseMatrix out = DenseMatrix::Zero(pattern.dim(), pattern.dim());
  for (std::size_t p = 0; p < d.size(); ++p) {
    const auto [i, j] = pattern.pairs()[p];
    out.block(i * m, j * m, m, m) = d[p];
  }
  return out;
}

DenseMatrix gather_row_blocks(const DenseMatrix& omega, const std::vector<Index>& blocks, Index block_size) {
  DenseMatrix out(static_cast<Index>(blocks.size()) * block_size, omega.cols());
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    out.middleRows(static_cast<Index>(t) * block_size, block_size) =
        omega.middleRows(blocks[t] * block_size, block_size);
  }
  return out;
}

namespace {

void check_matrix(const DenseMatrix& a, const BLR2Pattern& pattern) {
  if (a.rows() != pattern.dim() || a.cols() != pattern.dim()) {
    fail(ErrorKind::dimension_mismatch, "matrix does not match the BLR2 pattern dimension");
  }
}

}  // namespace

DenseMatrix blr2_block_row(const DenseMatrix& a, const BLR2Pattern& pattern, Index i) {
  check_matrix(a, pattern);
  const Index m = pattern.block_size();
  const auto cols = pattern.row_complement(i);
  DenseMatrix out(m, static_cast<Index>(cols.size()) * m);
  for (std::size_t t = 0; t < cols.size(); ++t) {
    out.middleCols(static_cast<Index>(t) * m, m) = a.block(i * m, cols[t] * m, m, m);
  }
  return out;
}

DenseMatrix blr2_block_col(const DenseMatrix& a, const BLR2Pattern& pattern, Index j) {
  check_matrix(a, pattern);
  const Index m = pattern.block_size();
  const auto rows = pattern.col_complement(j);
  DenseMatrix out(static_cast<Index>(rows.size()) * m, m);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out.middleRows(static_cast<Index>(t) * m, m) = a.block(rows[t] * m, j * m, m, m);
  }
  return out;
}

namespace {

void check_width(const BLR2Pattern& pattern, Index rank, Index width) {
  if (rank < 1 || rank > pattern.block_size()) {
    fail(ErrorKind::rank_out_of_range, "BLR2 rank must be in [1, m]");
  }
  if (width < pattern.min_sketch_width(rank)) {
    fail(ErrorKind::sketch_too_small, "s = " + std::to_string(width) + " below s_max m + k + 2 = " +
                                          std::to_string(pattern.min_sketch_width(rank)));
  }
}

Blr2Nullified nullify(const DenseMatrix& omega, const DenseMatrix& y, const std::vector<Index>& blocks,
                      Index m, Index i) {
  Blr2Nullified out;
  if (blocks.empty()) {
    out.p = DenseMatrix::Identity(omega.cols(), omega.cols());
  } else {
    const Index nrows = static_cast<Index>(blocks.size()) * m;
    out.p = nullspace_basis(gather_row_blocks(omega, blocks, m));
    if (out.p.cols() != omega.cols() - nrows) {
      fail(ErrorKind::rank_deficient, "sketch rows of block " + std::to_string(i) + " are rank deficient");
    }
  }
  out.sketch = y.middleRows(i * m, m) * out.p;
  return out;
}

}  // namespace

Blr2Nullified blr2_block_nullify(const DenseMatrix& omega, const DenseMatrix& y, const BLR2Pattern& pattern,
                                 Index i, Index rank) {
  if (omega.rows() != pattern.dim() || y.rows() != pattern.dim() || y.cols() != omega.cols()) {
    fail(ErrorKind::dimension_mismatch, "blr2_block_nullify: sketch shapes");
  }
  if (i < 0 || i >= pattern.block_count()) fail(ErrorKind::index_out_of_range, "blr2_block_nullify: block");
  check_width(pattern, rank, omega.cols());
  return nullify(omega, y, pattern.row_set(i), pattern.block_size(), i);
}

Blr2Result blr2_from_matvecs(const MatvecOracle& oracle, const BLR2Pattern& pattern, Index rank,
                             Index sketch_width, std::uint64_t seed, Blr2Options options) {
  if (oracle.dim() != pattern.dim()) {
    fail(ErrorKind::dimension_mismatch, "oracle dimension " + std::to_string(oracle.dim()) +
                                            ", pattern needs " + std::to_string(pattern.dim()));
  }
  check_width(pattern, rank, sketch_width);
  const Index b = pattern.block_count();
  const Index m = pattern.block_size();
  const Index s = sketch_width;
  const RngStream base(seed);
  const int lvl = options.stream_level;
  const ExecPolicy exec = options.exec;

  CountingOracle counted(oracle);
  const DenseMatrix omega = sample_sketch(base, lvl, b, m, s, StreamRole::omega);
  const DenseMatrix omega_t = sample_sketch(base, lvl, b, m, s, StreamRole::omega_tilde);
  const DenseMatrix psi = sample_sketch(base, lvl, b, m, s, StreamRole::psi);
  const DenseMatrix psi_t = sample_sketch(base, lvl, b, m, s, StreamRole::psi_tilde);
  DenseMatrix fwd_in(pattern.dim(), 2 * s), bwd_in(pattern.dim(), 2 * s);
  fwd_in << omega, omega_t;
  bwd_in << psi, psi_t;
  const DenseMatrix fwd = counted.apply(fwd_in);
  const DenseMatrix bwd = counted.apply_transpose(bwd_in);
  const DenseMatrix y = fwd.leftCols(s), y_t = fwd.rightCols(s);
  const DenseMatrix z = bwd.leftCols(s), z_t = bwd.rightCols(s);
  const QueryCount sketched = counted.count();

  std::vector<DenseMatrix> u(static_cast<std::size_t>(b)), v(static_cast<std::size_t>(b));
  std::vector<DenseMatrix> row_part(static_cast<std::size_t>(b)), col_part(static_cast<std::size_t>(b));
  // Row pass: U_i and (I - U_i U_i^T) Y~_i pinv(Omega~_{R_i}).
  for_each_block(exec, b, [&](std::int64_t i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto& ri = pattern.row_set(i);
    u[ui] = pcps_basis(nullify(omega, y, ri, m, i).sketch, rank);
    if (!ri.empty()) {
      DenseMatrix t = right_pinv_apply(y_t.middleRows(i * m, m), gather_row_blocks(omega_t, ri, m));
      t -= u[ui] * (u[ui].transpose() * t);
      row_part[ui] = std::move(t);
    }
  });
  // Column pass: V_j and (I - V_j V_j^T) Z~_j pinv(Psi~_{C_j}).
  for_each_block(exec, b, [&](std::int64_t j) {
    const auto uj = static_cast<std::size_t>(j);
    const auto& cj = pattern.col_set(j);
    v[uj] = pcps_basis(nullify(psi, z, cj, m, j).sketch, rank);
    if (!cj.empty()) {
      DenseMatrix t = right_pinv_apply(z_t.middleRows(j * m, m), gather_row_blocks(psi_t, cj, m));
      t -= v[uj] * (v[uj].transpose() * t);
      col_part[uj] = std::move(t);
    }
  });

  const auto& pairs = pattern.pairs();
  std::vector<DenseMatrix> d(pairs.size());
  for_each_block(exec, static_cast<std::int64_t>(pairs.size()), [&](std::int64_t p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    const auto& ri = pattern.row_set(i);
    const auto& cj = pattern.col_set(j);
    const Index jpos = std::lower_bound(ri.begin(), ri.end(), j) - ri.begin();
    const Index ipos = std::lower_bound(cj.begin(), cj.end(), i) - cj.begin();
    const auto& ui = u[static_cast<std::size_t>(i)];
    DenseMatrix ct = col_part[static_cast<std::size_t>(j)].middleCols(ipos * m, m).transpose();
    d[static_cast<std::size_t>(p)] =
        row_part[static_cast<std::size_t>(i)].middleCols(jpos * m, m) + ui * (ui.transpose() * ct);
  });

  BLR2Factorization f{pattern, rank, BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                      DenseMatrix(), std::move(d)};
  // X = U^T (A V - D V) with b k forward probes.
  const DenseMatrix vd = f.v.dense();
  DenseMatrix av = counted.apply(vd);
  const QueryCount coupling{counted.count().forward - sketched.forward,
                            counted.count().transpose - sketched.transpose};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    av.middleRows(i * m, m) -= f.d[p] * vd.middleRows(j * m, m);
  }
  f.x = f.u.apply_transpose(av, exec);
  return Blr2Result{std::move(f), sketched, coupling};
}

DenseMatrix blr2_reconstruct(const BLR2Factorization& f) {
  DenseMatrix out = f.u.apply(f.v.right_apply_transpose(f.x));
  const Index m = f.pattern.block_size();
  for (std::size_t p = 0; p < f.d.size(); ++p) {
    const auto [i, j] = f.pattern.pairs()[p];
    out.block(i * m, j * m, m, m) += f.d[p];
  }
  return out;
}

DenseMatrix blr2_apply(const BLR2Factorization& f, const DenseMatrix& x) {
  if (x.rows() != f.pattern.dim()) fail(ErrorKind::dimension_mismatch, "blr2_apply operand");
  DenseMatrix y = f.u.apply(f.x * f.v.apply_transpose(x));
  const Index m = f.pattern.block_size();
  for (std::size_t p = 0; p < f.d.size(); ++p) {
    const auto [i, j] = f.pattern.pairs()[p];
    y.middleRows(i * m, m).noalias() += f.d[p] * x.middleRows(j * m, m);
  }
  return y;
}

Blr2Bounds blr2_bounds(Index sketch_width, Index s_max, Index block_size, Index rank) {
  const double s = static_cast<double>(sketch_width);
  const double sm = static_cast<double>(s_max * block_size);
  const double k = static_cast<double>(rank);
  if (sketch_width < s_max * block_size + rank + 2) {
    fail(ErrorKind::sketch_too_small, "blr2_bounds needs s >= s_max m + k + 2");
  }
  const double g = 1.0 + 2.0 * std::numbers::e * (s - sm) / std::sqrt((s - sm - k) * (s - sm - k) - 1.0);
  Blr2Bounds out;
  out.gamma_r = g * g;
  out.gamma_c = out.gamma_r;
  out.gamma_d = sm / (s - sm - 1);
  out.factor = (out.gamma_r + out.gamma_c) * (1 + out.gamma_d);
  return out;
}

BLR2Factorization random_blr2(const BLR2Pattern& pattern, Index rank, std::uint64_t seed) {
  const Index b = pattern.block_count();
  const Index m = pattern.block_size();
  if (rank < 1 || rank > m) fail(ErrorKind::rank_out_of_range, "random_blr2 rank");
  const RngStream base(seed);
  std::vector<DenseMatrix> u, v, d;
  for (Index i = 0; i < b; ++i) {
    u.push_back(random_orthonormal(m, rank, base.child(0, i, StreamRole::factor_u)));
    v.push_back(random_orthonormal(m, rank, base.child(0, i, StreamRole::factor_v)));
  }
  for (std::size_t p = 0; p < pattern.pairs().size(); ++p) {
    d.push_back(gaussian(m, m, base.child(0, static_cast<std::int64_t>(p), StreamRole::factor_d)));
  }
  DenseMatrix x = gaussian(b * rank, b * rank, base.child(0, 0, StreamRole::factor_x));
  return BLR2Factorization{pattern, rank, BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                           std::move(x), std::move(d)};
}

}  // namespace hssmv
