#pragma once

#include <cstddef>
#include <functional>

namespace kiq {

/// Runs body(i) for i in [0, n) on up to n_threads threads in contiguous
/// chunks. n_threads <= 1 runs inline. The first exception thrown by any
/// chunk is rethrown on the calling thread after all workers join, so
/// callers that index into preallocated output keep deterministic results.
void parallel_for(std::size_t n, int n_threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace kiq
