#pragma once

#include <cstddef>
#include <functional>

namespace nsmorse {

/// Upper bound on worker threads used by the sampling loops. 0 restores the
/// hardware default.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs fn(i) for i in [0, n). The first exception thrown by any worker is
/// rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nsmorse
