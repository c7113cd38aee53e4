#pragma once

#include <cstddef>
#include <functional>

namespace rigidity {

/// Worker count: RIGIDITY_LAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int worker_count();

/// Calls fn(i) for i in [0, count) on up to worker_count() threads. Each index
/// runs exactly once; callers write results into slot i, which keeps the
/// merged output independent of scheduling. The first exception thrown by
/// any task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace rigidity
