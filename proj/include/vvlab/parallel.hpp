#pragma once

#include <cstddef>
#include <functional>

namespace vvlab {

// Worker count: VVLAB_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
std::size_t worker_count();

// Calls body(i) for i in [0, n). Each index must write only its own output
// slot, so results do not depend on how indices are distributed over threads.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vvlab
