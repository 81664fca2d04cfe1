#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#include <omp.h>

namespace cpphase {

enum class Execution { serial, parallel };

// Thread cap: CPPHASE_THREADS if set and positive, else the OpenMP default.
inline int thread_cap() {
  if (const char* env = std::getenv("CPPHASE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

// Runs f(i) for i in [0, n). Each index must write only its own slot, so the
// serial and parallel schedules produce identical results.
template <class F>
void for_each_index(std::size_t n, F&& f, Execution ex = Execution::parallel) {
  if (ex == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
  for (long i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f, Execution ex = Execution::parallel) {
  std::vector<T> out(n);
  for_each_index(
      n, [&](std::size_t i) { out[i] = f(i); }, ex);
  return out;
}

}  // namespace cpphase
