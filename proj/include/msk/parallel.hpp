#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace msk {

/// Execution policy for the data-parallel kernels. Serial is the reference path; Parallel
/// distributes independent iterations over OpenMP threads and must produce identical results.
enum class Exec { Serial, Parallel };

int max_threads();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots by the caller.
/// If iterations throw, the exception of the lowest failing index is rethrown, so both
/// policies fail identically.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace msk
