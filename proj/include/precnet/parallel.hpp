#pragma once

#include <cstddef>
#include <functional>

namespace precnet {

// 0 means "use PRECNET_THREADS if set, otherwise the available parallelism".
unsigned resolve_threads(unsigned requested);

// Runs fn(0..count-1) on up to `threads` workers. Tasks must write only to
// their own output slots. The exception of the lowest failing index, if any,
// is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace precnet
