#ifndef ESQPT_PARALLEL_HPP
#define ESQPT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace esqpt {

/// Worker count: min(ESQPT_THREADS, hardware concurrency), at least 1.
int worker_count();

/// Runs fn(i) for i in [0, n). Tasks must be independent; any result
/// aggregation keyed by i stays deterministic regardless of worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace esqpt

#endif
