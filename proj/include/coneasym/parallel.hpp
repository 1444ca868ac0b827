#pragma once

#include <cstddef>
#include <functional>

namespace coneasym {

/// Worker count: CONE_ASYM_THREADS if set to a positive integer, else the hardware count.
unsigned thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads. Each index is
/// handled exactly once and results must be written to per-index slots, so the
/// outcome does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace coneasym
