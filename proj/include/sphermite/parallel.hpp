#pragma once

#include <cstddef>
#include <functional>

namespace sphermite {

/// Worker count: SPHERMITE_THREADS when set (>= 1), else hardware concurrency.
int thread_count();

/// Runs body(begin, end, worker) over contiguous chunks of [0, n). Workers
/// are numbered 0..thread_count()-1. The first exception thrown by any worker
/// is rethrown on the caller after all workers join.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body);

/// Per-index convenience wrapper around parallel_chunks.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    parallel_chunks(n, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) f(i);
    });
}

}  // namespace sphermite
