#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace tsc {

// Worker cap for parallel_for. 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for every i in [0, n). Items must be independent and write to
// disjoint slots so the schedule cannot change the outcome. Exceptions from
// workers are rethrown on the calling thread.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

// Pairwise (cascade) summation: a fixed reduction tree, so the result does
// not depend on chunking or thread count.
double pairwise_sum(std::span<const double> values);
double pairwise_mean(std::span<const double> values);

}  // namespace tsc
