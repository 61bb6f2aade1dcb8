#pragma once

#include <cstddef>
#include <functional>

namespace mfs {

/// Number of worker threads used by parallel_for; 0 (the default) means the
/// hardware count.
void set_thread_count(int count);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once and the
/// body must only write to state owned by that index, so the result does not
/// depend on the thread count. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mfs
