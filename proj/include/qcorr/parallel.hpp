#pragma once

// Data-parallel index maps. `map_parallel` fans an index range out over
// OpenMP threads; `map_serial` is the reference it must agree with bit for
// bit. Results are always stored by index, so output order never depends on
// thread scheduling.

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcorr::parallel {

template <class T, class F>
std::vector<T> map_serial(std::size_t n, F&& fn) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

template <class T, class F>
std::vector<T> map_parallel(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

enum class Execution { kSerial, kParallel };

template <class T, class F>
std::vector<T> map(Execution exec, std::size_t n, F&& fn) {
  return exec == Execution::kParallel ? map_parallel<T>(n, std::forward<F>(fn))
                                      : map_serial<T>(n, std::forward<F>(fn));
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qcorr::parallel
