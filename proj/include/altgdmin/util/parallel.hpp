#pragma once

#include <cstddef>
#include <functional>

namespace altgdmin {

/// Runs fn(i) for i in [0, count) on up to `threads` workers with contiguous
/// static chunks. Callers must write results to disjoint, index-addressed
/// slots; combined with the exact reducers this makes every output invariant
/// to the thread count. Exceptions are captured and rethrown once.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Requested thread count clamped by ALTGDMIN_REFERENCE_MODE=1 (forces 1).
int effective_threads(int requested);

/// True when ALTGDMIN_REFERENCE_MODE=1 is set.
bool reference_mode();

}  // namespace altgdmin
