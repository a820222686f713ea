#pragma once

#include <cstddef>
#include <functional>

namespace ckomit {

// Worker count from an explicit request, else CK_OMIT_THREADS, else 1.
int resolve_threads(int requested);

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; the first exception thrown is rethrown after all
// workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace ckomit
