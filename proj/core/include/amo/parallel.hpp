#pragma once

#include <cstddef>
#include <functional>

namespace amo {

// Worker count: AMO_THREADS if set (clamped to [1, 256]), else the hardware
// concurrency, else 1.
unsigned thread_count();

// Runs fn(i) for i in [0, n) on a bounded worker pool. Callers write results
// into preallocated slots indexed by i, so output ordering is independent of
// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace amo
