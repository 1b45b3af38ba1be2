#pragma once

#include <cstddef>
#include <functional>

namespace circleflow::detail {

/// Worker count from CIRCLEFLOW_THREADS (0 or unset = hardware concurrency).
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Runs inline when
/// n < min_parallel or only one thread is available. The first exception
/// thrown by any chunk is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t min_parallel,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace circleflow::detail
