#pragma once

#include <cstddef>
#include <functional>

namespace psq {

/// Worker count for internal parallel loops: hardware concurrency, capped by
/// the PROLATE_SQUEEZE_THREADS environment variable when it is set.
unsigned thread_count();

/// Runs body(i) for i in [0, n) over up to thread_count() threads. Iterations
/// are split into contiguous chunks; body must not touch shared mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace psq
