#pragma once

#include <cstddef>
#include <functional>

namespace uwbsim {

/// Worker count: hardware concurrency, capped by UWBSIM_THREADS when set to a
/// positive integer (0 or unset means no cap). Always >= 1.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Rethrows the first
/// exception after all workers have stopped.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

} // namespace uwbsim
