#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hssmv {

enum class ErrorKind {
  dimension_mismatch,
  index_out_of_range,
  rank_out_of_range,
  non_finite,
  not_wide,
  rank_deficient,
  sketch_too_small,
  invalid_argument,
  zero_norm,
  factorization_failed,
  // binary container errors
  bad_magic,
  version_mismatch,
  truncated,
  trailing_bytes,
  bad_header,
  invalid_factor,
  // experiment harness
  config_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers and tests can
/// tell apart e.g. a truncated container from a bad magic number.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) fail(kind, what);
}

}  // namespace hssmv
