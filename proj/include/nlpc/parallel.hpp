#pragma once

#include <cstddef>
#include <functional>

namespace nlpc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Work is split into contiguous blocks; callers write results
/// by index so output never depends on scheduling. The first exception thrown
/// by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace nlpc
