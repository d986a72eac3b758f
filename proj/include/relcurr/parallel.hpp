#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace relcurr {

/// Execution path for the data-parallel kernels. `Serial` is the reference
/// implementation; `Parallel` must produce bit-identical results.
enum class Exec { Serial, Parallel };

/// Runs body(i) for i in [0, n). Per-index work must be independent; the
/// exception from the lowest failing index is rethrown on the calling thread,
/// matching what the serial path would report.
template <typename Body>
void for_each_index(Exec exec, std::size_t n, Body&& body) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  long long failed_at = -1;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure || i < failed_at) {
        failure = std::current_exception();
        failed_at = i;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace relcurr
