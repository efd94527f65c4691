#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace fqe {

/// Worker count used by data-parallel sweeps. Defaults to 1.
unsigned thread_budget();
void set_thread_budget(unsigned threads);

/// Runs body(i) for i in [0, count) on up to thread_budget() threads.
/// Each index is visited exactly once; callers write into per-index slots so
/// results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fqe
