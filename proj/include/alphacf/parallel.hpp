#pragma once

#include <cstddef>
#include <functional>

namespace alphacf {

// Worker count: hardware concurrency, or the ALPHACF_THREADS environment
// variable when it holds a positive integer.
std::size_t worker_count();

// Runs body(begin, end) over contiguous chunks of [0, n) on up to
// worker_count() threads. Chunk boundaries depend only on n and `chunks`,
// never on the thread count.
void parallel_chunks(std::size_t n, std::size_t chunks, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace alphacf
