#pragma once

#include <cstddef>
#include <functional>

namespace kfront {

// Upper bound on worker threads used by fan-out helpers; 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(0..count-1). Results must be written by index; the exception from
// the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace kfront
