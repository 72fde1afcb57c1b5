// parallel.hpp — minimal worker-pool helpers for enumeration sweeps.
// Results must be merged by the caller in chunk order so that aggregates do
// not depend on the number of workers.  MUCHECK_THREADS caps the pool.

#pragma once

#include <cstdint>
#include <functional>

namespace mucheck {

int thread_budget();

// Splits [0, count) into fixed contiguous chunks (independent of the worker
// count) and invokes fn(chunk_index, begin, end) from the pool.
void parallel_chunks(uint64_t count,
                     const std::function<void(size_t, uint64_t, uint64_t)>& fn);

// Runs fn(task_index) for every index in [0, tasks) from the pool.
void parallel_tasks(size_t tasks, const std::function<void(size_t)>& fn);

}  // namespace mucheck
