#pragma once

#include <cstddef>
#include <functional>

namespace driftgreen {

/// Number of workers to use: `requested` if nonzero, otherwise the hardware concurrency,
/// in both cases capped by the DRIFTGREEN_THREADS environment variable when it is set.
unsigned worker_count(unsigned requested = 0);

/// Calls fn(begin, end) on disjoint chunks covering [0, n), spread over `workers` threads.
/// Chunks are handed out dynamically, so fn must not depend on which thread runs it.
void parallel_chunks(std::size_t n, std::size_t chunk, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace driftgreen
