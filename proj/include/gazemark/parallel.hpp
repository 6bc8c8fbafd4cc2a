#pragma once

#include <cstddef>
#include <functional>

namespace gazemark {

/// Thread cap: GAZEMARK_THREADS env var if set, else hardware concurrency.
std::size_t max_threads();

/// Runs fn(i) for i in [0, n). Each unit must write only to its own output
/// slot; with that discipline results are independent of scheduling. Nested
/// calls run serially on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gazemark
