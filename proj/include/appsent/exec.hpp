#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace appsent {

/// Every data-parallel kernel has a serial reference path. Both paths must
/// produce identical results; the tests compare them bit for bit.
enum class Exec { Serial, Parallel };

inline int available_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls body(i) for i in [0, n). Iterations must write disjoint outputs.
/// If several iterations throw, the exception of the lowest index is rethrown,
/// so failures are reported the same way under either policy.
template <typename Body>
void parallel_for(std::size_t n, Exec exec, Body&& body, int threads = 0) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#else
  (void)threads;
#endif
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace appsent
