#pragma once

#include <Eigen/Core>
#include <functional>

namespace tngp {

/// Sets the worker count for row-parallel fills. 0 selects
/// hardware_concurrency; the default is 1 (serial).
void set_num_threads(int n);
int num_threads();

/// Runs fn(begin, end) over a partition of [0, n). Chunks are contiguous
/// and disjoint, so elementwise fills stay deterministic under any
/// thread count. Serial when num_threads() == 1 or n is small.
void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn);

}  // namespace tngp
