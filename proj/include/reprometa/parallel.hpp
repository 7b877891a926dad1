#pragma once

#include <cstddef>
#include <functional>

namespace reprometa {

// Resolved worker count: 0 means "use hardware concurrency".
int resolve_workers(int workers);

// Runs f(index, worker_id) for every index in [0, count). Tasks are handed
// out through a shared counter; callers must write results by index so the
// outcome is independent of scheduling and worker count. worker_id is in
// [0, workers) and stable for the duration of a task (for per-worker scratch).
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, int)>& f);

}  // namespace reprometa
