#pragma once

#include <cstddef>
#include <functional>

namespace ldpustat {

/// Worker cap: LDPUSTAT_THREADS if set and positive, else hardware concurrency.
std::size_t thread_limit();

/// Runs body(i) for i in [0, count). Work is statically partitioned so results that
/// are written to slot i and merged afterwards in index order are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation in fixed order.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace ldpustat
