#pragma once

#include <cstddef>
#include <functional>

namespace pagealign {

// Worker count: PAGEALIGN_THREADS when set and positive, otherwise the
// hardware concurrency (0 in the variable means "auto").
unsigned thread_count();

// Runs body(i) for i in [0, n). Iterations must be independent. Exceptions
// from workers are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pagealign
