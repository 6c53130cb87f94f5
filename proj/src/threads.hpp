#pragma once

#include <cstddef>
#include <functional>

namespace crl {

// min(hardware concurrency, CRLSCORE_THREADS); at least 1.
size_t thread_budget();

// Runs fn(i) for i in [0, count). Work is split into static blocks; results
// must be written to per-index slots so the outcome is identical no matter
// how the blocks are scheduled. The first worker exception is rethrown.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace crl
