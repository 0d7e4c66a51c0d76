#pragma once

// Include this instead of <omp.h> so the kernels still build without OpenMP.
#if defined(_OPENMP)
#include <omp.h>
namespace npcd {
constexpr bool kUseOpenMP = true;
inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}
}  // namespace npcd
#else
namespace npcd {
constexpr bool kUseOpenMP = false;
inline int max_threads() { return 1; }
inline void set_threads(int) {}
}  // namespace npcd
#endif
