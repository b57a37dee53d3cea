#pragma once

// Index-space loops with a serial reference path and an OpenMP path.
// Kernels take an Exec argument; tests run both and compare results.

#include <cstdint>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigma {

enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls body(i) for i in [0, n). Bodies must write only to slot i of
/// caller-owned storage. The first exception thrown by any body is
/// rethrown after the loop.
template <class Body>
void for_each_index(Exec exec, std::uint64_t n, Body&& body) {
  if (exec == Exec::serial || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::uint64_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Number of i in [0, n) with pred(i) true.
template <class Pred>
std::uint64_t count_if_index(Exec exec, std::uint64_t n, Pred&& pred) {
  if (exec == Exec::serial || n < 2) {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i) c += pred(i) ? 1 : 0;
    return c;
  }
  std::uint64_t c = 0;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(+ : c) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      c += pred(static_cast<std::uint64_t>(i)) ? 1 : 0;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return c;
}

}  // namespace sigma
