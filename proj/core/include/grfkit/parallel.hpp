#pragma once

#include <cstddef>
#include <functional>

namespace grfkit {

/// Worker count: `requested` if nonzero, else GRFKIT_THREADS if set and
/// nonzero, else the hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested = 0);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace grfkit
