#pragma once

#include <cstddef>
#include <functional>

namespace holoflow {

/// Worker count used by parallel loops; 0 selects the hardware default.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n) over contiguous static chunks. Nested calls
/// run serially. Results must be written to per-index slots so reductions
/// happen afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holoflow
