#include "hssmv/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "hssmv/error.hpp"
#include "hssmv/greedy_explicit.hpp"
#include "hssmv/matrix_io.hpp"
#include "hssmv/matvec_hss.hpp"
#include "hssmv/rng.hpp"
#include "hssmv/testbed.hpp"

namespace hssmv {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

class Params {
 public:
  Params(const std::string& family, const std::string& body) : family_(family) {
    for (const auto& kv : split(body, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ErrorKind::invalid_argument, family + ": expected key=value, got " + kv);
      values_[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
    }
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    T v{};
    if (!parse_number(it->second, v)) {
      fail(ErrorKind::invalid_argument, family_ + ": bad value for " + key + ": " + it->second);
    }
    values_.erase(it);
    return v;
  }

  void finish() const {
    if (!values_.empty()) fail(ErrorKind::invalid_argument, family_ + ": unknown parameter " + values_.begin()->first);
  }

 private:
  std::string family_;
  std::map<std::string, std::string> values_;
};

// A * I in column chunks so wide operands stay small.
DenseMatrix probe_dense(const MatvecOracle& oracle) {
  const Index n = oracle.dim();
  const Index chunk = 64;
  DenseMatrix out(n, n);
  for (Index c = 0; c < n; c += chunk) {
    const Index w = std::min(chunk, n - c);
    DenseMatrix e = DenseMatrix::Zero(n, w);
    for (Index t = 0; t < w; ++t) e(c + t, t) = 1.0;
    out.middleCols(c, w) = oracle.apply(e);
  }
  return out;
}

Problem dense_problem(std::string name, DenseMatrix a) {
  Problem p;
  p.name = std::move(name);
  p.dense = a;
  p.oracle = std::make_unique<DenseOracle>(std::move(a));
  return p;
}

}  // namespace

Problem make_problem(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = colon == std::string::npos ? spec : spec.substr(0, colon);
  Params params(family, colon == std::string::npos ? std::string() : spec.substr(colon + 1));
  if (family == "banded") {
    const auto n = params.get<Index>("n", 1024);
    const auto b = params.get<Index>("b", 17);
    const auto seed = params.get<std::uint64_t>("seed", 1);
    params.finish();
    Problem p;
    p.name = "banded";
    p.oracle = banded_inverse_oracle(n, b, seed);
    p.dense = probe_dense(*p.oracle);
    return p;
  }
  if (family == "grid") {
    const auto rows = params.get<Index>("rows", 1024);
    params.finish();
    Problem p;
    p.name = "grid";
    p.oracle = grid_schur_oracle(rows);
    p.dense = probe_dense(*p.oracle);
    return p;
  }
  if (family == "bie") {
    const auto n = params.get<Index>("n", 1920);
    const auto a = params.get<double>("a", 0.3);
    const auto w = params.get<int>("w", 5);
    params.finish();
    return dense_problem("bie", bie_star_matrix(n, a, w));
  }
  if (family == "hard") {
    const auto levels = params.get<int>("L", 4);
    const auto delta = params.get<double>("delta", 0.1);
    params.finish();
    return dense_problem("hard", hard_instance(levels, delta));
  }
  if (family == "hss") {
    const auto levels = params.get<int>("L", 3);
    const auto rank = params.get<Index>("k", 2);
    const auto seed = params.get<std::uint64_t>("seed", 1);
    params.finish();
    return dense_problem("hss", random_hss_matrix(levels, rank, seed));
  }
  if (colon == std::string::npos) return dense_problem("file", read_matrix(spec));
  fail(ErrorKind::invalid_argument, "unknown matrix family " + family);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_matrix = false, have_algorithms = false;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::config_error, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) bad("empty value for " + key);
    if (key == "matrix") {
      cfg.matrix = value;
      have_matrix = true;
    } else if (key == "L") {
      if (!parse_number(value, cfg.levels) || cfg.levels < 1) bad("L must be a positive integer");
    } else if (key == "k") {
      if (!parse_number(value, cfg.rank) || cfg.rank < 1) bad("k must be a positive integer");
    } else if (key == "algorithms") {
      cfg.algorithms = split(value, ',');
      for (const auto& a : cfg.algorithms) {
        if (a != "fresh" && a != "reused-svd" && a != "reused-qr" && a != "explicit" && a != "bstar") {
          bad("unknown algorithm " + a);
        }
      }
      have_algorithms = true;
    } else if (key == "s") {
      cfg.widths.clear();
      for (const auto& item : split(value, ',')) {
        Index s = 0;
        if (!parse_number(item, s) || s < 1) bad("bad sketch width " + item);
        cfg.widths.push_back(s);
      }
    } else if (key == "trials") {
      if (!parse_number(value, cfg.trials) || cfg.trials < 1) bad("trials must be a positive integer");
    } else if (key == "seed") {
      if (!parse_number(value, cfg.seed)) bad("seed must be an unsigned integer");
    } else if (key == "wall_clock") {
      if (value != "true" && value != "false") bad("wall_clock must be true or false");
      cfg.wall_clock = value == "true";
    } else {
      bad("unknown key " + key);
    }
  }
  if (!have_matrix) fail(ErrorKind::config_error, "missing key matrix");
  if (!have_algorithms) fail(ErrorKind::config_error, "missing key algorithms");
  if (cfg.widths.empty()) fail(ErrorKind::config_error, "missing key s");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io_error, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  return RngStream(base).child(0, trial, StreamRole::trial).key();
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  Problem problem = make_problem(cfg.matrix);
  const Index n = (Index{1} << (cfg.levels + 1)) * cfg.rank;
  if (problem.oracle->dim() != n) {
    fail(ErrorKind::config_error, "matrix dimension " + std::to_string(problem.oracle->dim()) +
                                      " does not equal 2^(L+1) k = " + std::to_string(n));
  }
  using clock = std::chrono::steady_clock;
  std::vector<ExperimentRecord> records;
  for (const auto& algo : cfg.algorithms) {
    // Deterministic algorithms are computed once and reported for every cell.
    double fixed_error = -1;
    double fixed_ms = 0;
    if (algo == "explicit" || algo == "bstar") {
      const auto t0 = clock::now();
      if (algo == "explicit") {
        fixed_error = frobenius_error(problem.dense, greedy_hss_explicit(problem.dense, cfg.levels, cfg.rank));
      } else {
        if (problem.name != "hard") fail(ErrorKind::config_error, "bstar is only defined for the hard matrix");
        fixed_error = frobenius_error(problem.dense, hard_instance_reference(cfg.levels));
      }
      fixed_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    }
    for (Index s : cfg.widths) {
      for (int t = 0; t < cfg.trials; ++t) {
        ExperimentRecord r;
        r.matrix = problem.name;
        r.algorithm = algo;
        r.levels = cfg.levels;
        r.rank = cfg.rank;
        r.sketch_width = s;
        r.trial = t;
        r.seed = trial_seed(cfg.seed, t);
        if (fixed_error >= 0) {
          r.rel_error = fixed_error;
          r.wall_ms = cfg.wall_clock ? fixed_ms : 0.0;
        } else {
          MatvecConfig mc;
          mc.levels = cfg.levels;
          mc.rank = cfg.rank;
          mc.sketch_width = s;
          mc.seed = r.seed;
          mc.policy = algo == "fresh" ? SketchPolicy::fresh : SketchPolicy::reused;
          mc.basis = algo == "reused-qr" ? BasisMethod::pivoted_qr : BasisMethod::svd_pcps;
          const auto t0 = clock::now();
          MatvecResult res = hss_from_matvecs(*problem.oracle, mc);
          const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
          const QueryCount q = res.total_queries();
          r.forward_queries = q.forward;
          r.transpose_queries = q.transpose;
          r.rel_error = frobenius_error(problem.dense, res.factorization);
          r.wall_ms = cfg.wall_clock ? ms : 0.0;
        }
        records.push_back(std::move(r));
      }
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.sketch_width != b.sketch_width) return a.sketch_width < b.sketch_width;
    return a.trial < b.trial;
  });
  return records;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kCsvHeader << '\n';
  char num[64];
  for (const auto& r : records) {
    out << r.matrix << ',' << r.algorithm << ',' << r.levels << ',' << r.rank << ',' << r.sketch_width << ','
        << r.trial << ',' << r.seed << ',' << r.forward_queries << ',' << r.transpose_queries << ',';
    std::snprintf(num, sizeof num, "%.17g", r.rel_error);
    out << num << ',';
    std::snprintf(num, sizeof num, "%.3f", r.wall_ms);
    out << num << '\n';
  }
}

}  // namespace hssmv
