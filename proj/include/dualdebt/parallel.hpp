#pragma once

#include <cstddef>
#include <functional>

namespace dualdebt {

// Number of worker threads used by the table sweeps. 0 means hardware concurrency.
void set_jobs(unsigned jobs);
unsigned jobs();

// Runs body(i) for i in [0, n). Each index must write only its own output cells.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dualdebt
