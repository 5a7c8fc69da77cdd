#pragma once

#include <cstddef>
#include <functional>

namespace chainrt {

/// Worker count used by parallel_for; 1 by default. Results never depend on it.
void set_jobs(unsigned jobs);
unsigned jobs();

/// Runs fn(i) for i in [0, n). Each index must write only its own slot.
/// Exceptions are rethrown from the lowest failing index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace chainrt
