#pragma once

#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ltl {

// Worker count: LTL_THREADS overrides the OpenMP default.
inline int thread_count() {
#ifdef _OPENMP
    if (const char* env = std::getenv("LTL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs body(block) for block in [0, n_blocks). Each block writes only to its
// own slot, so the merged result is independent of scheduling order; with
// parallel=false this is the serial reference path.
template <class Body>
void for_each_block(int n_blocks, bool parallel, Body&& body) {
#ifdef _OPENMP
    if (parallel && n_blocks > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
        for (int b = 0; b < n_blocks; ++b) body(b);
        return;
    }
#endif
    for (int b = 0; b < n_blocks; ++b) body(b);
}

}  // namespace ltl
