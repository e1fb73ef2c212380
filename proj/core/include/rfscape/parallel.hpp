#pragma once

#include <cstddef>
#include <functional>

namespace rfscape {

// Runs fn(i) for i in [0, n) across `workers` threads (0 = hardware count).
// Work is split into contiguous blocks; callers own any output slots, so the
// result layout is independent of scheduling.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

unsigned default_workers();

}  // namespace rfscape
