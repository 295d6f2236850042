#pragma once

#include <cstddef>
#include <functional>

namespace rauzy {

// Worker count: RAUZY_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Calls fn(i) for every i in [0, n) on up to `threads` workers (0 means
// worker_count()). fn must only write state owned by index i. The
// exception from the lowest failing index is rethrown once workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace rauzy
