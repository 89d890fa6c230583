#pragma once

#include <cstddef>
#include <functional>

namespace rmt {

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = hardware).
/// Indices are claimed from a shared counter; callers store results by index so
/// the outcome does not depend on scheduling. Every index runs; the exception of the
/// lowest failing index is rethrown afterwards.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

unsigned resolve_threads(unsigned threads);

}  // namespace rmt
