#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fedalloc::detail {

// FEDALLOC_THREADS caps every parallel region; 0 means "no cap set"
inline int env_thread_cap() {
  const char* env = std::getenv("FEDALLOC_THREADS");
  if (!env) return 0;
  const int v = std::atoi(env);
  return v >= 1 ? v : 0;
}

inline int resolve_threads() {
  const int cap = env_thread_cap();
  if (cap > 0) return cap;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fedalloc::detail
