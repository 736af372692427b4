#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kappaest {

// Execution policy for the data-parallel kernels. Both paths produce
// bit-identical results: parallel loops only ever write disjoint slots and
// all reductions are performed serially over per-slot buffers.
enum class Exec { serial, parallel };

inline int worker_count(Exec exec) {
#ifdef _OPENMP
    return exec == Exec::parallel ? omp_get_max_threads() : 1;
#else
    (void)exec;
    return 1;
#endif
}

}  // namespace kappaest
