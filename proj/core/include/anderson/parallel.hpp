#pragma once

#include <cstddef>
#include <functional>

namespace anderson {

/// Worker count from ANDERSON_LAB_THREADS; unset, 0 or unparsable means hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. Indices are
/// handed out dynamically, so body must only write to slot i of shared output.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace anderson
