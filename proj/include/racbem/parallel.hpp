#pragma once

#include <cstddef>
#include <functional>

namespace racbem {

/// Worker count used by parallel_for; 0 means hardware concurrency.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Runs fn(i) for i in [0, n). Iterations must be independent; the first
/// exception thrown is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace racbem
