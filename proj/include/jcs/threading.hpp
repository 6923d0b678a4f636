#pragma once

#include <functional>

namespace jcs {

// Runs fn(i) for every i in [0, n) across `workers` threads. Tasks are claimed
// from a shared counter and results must be written to index-addressed slots,
// which keeps outputs identical for any worker count. The first exception
// thrown by a task is rethrown on the calling thread after all workers join.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

// Picks a worker count: `requested` if positive, otherwise the hardware
// concurrency (at least 1).
int resolve_workers(int requested);

}  // namespace jcs
