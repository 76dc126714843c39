#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bohmlab {

/// Execution mode for the data-parallel kernels. Every kernel writes
/// per-item results to disjoint slots and reduces serially in index
/// order, so `openmp` output is bit-identical to `serial` for any
/// thread count. `serial` is the reference path used by the tests.
enum class ExecMode { serial, openmp };

#ifdef _OPENMP
inline constexpr bool openmp_compiled = true;
#else
inline constexpr bool openmp_compiled = false;
#endif

template <typename Fn>
void parallel_for(std::size_t n, ExecMode mode, Fn&& fn) {
    if (mode == ExecMode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace bohmlab
