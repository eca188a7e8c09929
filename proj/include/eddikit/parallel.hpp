#pragma once

#include <cstddef>
#include <functional>

namespace eddikit {

// Worker count: EDDIKIT_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned thread_limit() noexcept;

// Runs fn(i) for i in [0, n) on up to thread_limit() threads. Each index is
// handled exactly once; the first exception thrown is rethrown after all
// workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace eddikit
