#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace hssmv {

/// `serial` is the reference path; `parallel` distributes independent block
/// computations over OpenMP threads. Both produce bit-identical results.
enum class ExecPolicy { serial, parallel };

/// Runs body(i) for i in [0, n). Exceptions thrown inside the parallel region
/// are captured and the first one is rethrown on the calling thread.
template <class Body>
void for_each_block(ExecPolicy policy, std::int64_t n, Body&& body) {
  if (policy == ExecPolicy::serial || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex guard;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hssmv
