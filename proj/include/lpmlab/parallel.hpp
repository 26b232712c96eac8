#pragma once

#include <cstddef>
#include <functional>

namespace lpmlab {

/// Worker count used by parallel loops: `requested` if positive, else the
/// LPM_LAB_THREADS environment variable, else hardware concurrency.
unsigned worker_count(unsigned requested = 0);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Tasks must not
/// depend on execution order; callers that need determinism write into
/// preallocated per-index slots. Exceptions from tasks are rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

}  // namespace lpmlab
