#pragma once

#include <cstddef>
#include <functional>

namespace lyapdisc {

// Worker count used by the parallel loops in this library. 0 means
// std::thread::hardware_concurrency().
void set_num_threads(unsigned count);
unsigned num_threads();

// Runs body(i) for i in [0, count). Each index is visited exactly once;
// callers write results into per-index slots so the outcome does not depend
// on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lyapdisc
