#pragma once

#include <functional>

#include <Eigen/Core>

namespace soliton {

// Worker count: SOLITON_LAB_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; the first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& fn);

}  // namespace soliton
