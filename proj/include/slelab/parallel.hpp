#ifndef SLELAB_PARALLEL_HPP
#define SLELAB_PARALLEL_HPP

#include <cstddef>

#include <omp.h>

namespace slelab {

// Path-parallel map: body(i) must write only into slot i of preallocated
// storage; reductions happen afterwards in index order, so results do not
// depend on the worker count.
template <class F>
void parallel_paths(std::size_t n, int workers, F&& body) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

// serial reference for kernel tests and benchmarks
template <class F>
void serial_paths(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace slelab

#endif
