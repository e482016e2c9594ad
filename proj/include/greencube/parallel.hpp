#pragma once

#include <cstddef>
#include <functional>

namespace greencube {

// 0 means one worker per hardware thread.
int resolve_threads(int requested);

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. Callers write results to per-index slots so the
// outcome never depends on the worker count. Rethrows the first exception.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace greencube
