#pragma once

#include <cstddef>
#include <functional>

namespace deltaprime {

/// Worker count from DELTAPRIME_THREADS (unset or 0 = hardware concurrency).
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace deltaprime
