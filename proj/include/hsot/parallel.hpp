#pragma once

#include <cstddef>
#include <functional>

namespace hsot {

/// Worker budget for internally parallel loops: HSOT_THREADS when set
/// (clamped to >= 1), hardware concurrency otherwise.
int thread_budget();

// Runs fn(begin, end) over a disjoint contiguous partition of [0, n), one
// chunk per worker. Each index is processed exactly once and chunks never
// overlap, so loops whose bodies write only to their own slots produce
// bit-identical results for any thread count.
void parallel_for_ranges(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn);

/// Per-index convenience wrapper around parallel_for_ranges.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hsot
