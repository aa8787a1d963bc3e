#include "hssmv/error.hpp"

namespace hssmv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::index_out_of_range: return "index out of range";
    case ErrorKind::rank_out_of_range: return "rank out of range";
    case ErrorKind::non_finite: return "non-finite entry";
    case ErrorKind::not_wide: return "matrix not wide";
    case ErrorKind::rank_deficient: return "rank deficient";
    case ErrorKind::sketch_too_small: return "sketch too small";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::zero_norm: return "zero norm";
    case ErrorKind::factorization_failed: return "factorization failed";
    case ErrorKind::bad_magic: return "bad magic";
    case ErrorKind::version_mismatch: return "version mismatch";
    case ErrorKind::truncated: return "truncated payload";
    case ErrorKind::trailing_bytes: return "trailing bytes";
    case ErrorKind::bad_header: return "bad header";
    case ErrorKind::invalid_factor: return "invalid factor";
    case ErrorKind::config_error: return "config error";
    case ErrorKind::io_error: return "i/o error";
  }
  return "unknown error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hssmv
