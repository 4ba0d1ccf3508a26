#pragma once

#include <cstddef>
#include <functional>

namespace osc {

/// Global worker cap shared by every module (the CLI's --threads flag).
/// Defaults to 1. Values < 1 are treated as 1.
void set_max_threads(int threads);
int max_threads();

/// Runs body(i) for i in [0, n) on up to max_threads() workers. Each index is
/// visited exactly once; callers write into per-index slots and reduce in
/// index order afterwards so the result does not depend on scheduling.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace osc
