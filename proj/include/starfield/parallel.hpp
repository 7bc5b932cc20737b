#pragma once

// Thin OpenMP shims. STARFIELD_THREADS caps the pool; exact arithmetic makes
// every parallel merge deterministic regardless of scheduling.

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace starfield {

inline int maxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int threadId() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline void applyThreadCapFromEnv() {
#ifdef _OPENMP
  if (const char* env = std::getenv("STARFIELD_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace starfield

#ifdef _OPENMP
#define PARALLEL_FOR _Pragma("omp parallel for schedule(static)")
#else
#define PARALLEL_FOR
#endif
