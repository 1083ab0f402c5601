#pragma once

#include <cstddef>
#include <functional>

namespace vlq {

// Global cap on worker threads; 0 means use hardware concurrency.
void set_max_threads(int nt);
int max_threads();

// Runs fn(begin, end) over disjoint chunks of [0, n). Chunk boundaries do
// not depend on the thread count, so writes to per-index slots are
// deterministic.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

} // namespace vlq
