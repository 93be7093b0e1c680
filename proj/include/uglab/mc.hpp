// Monte Carlo plumbing: estimates with standard errors, order-independent
// reductions, and a deterministic parallel-for.
#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace uglab {

struct McEstimate {
    double mean = 0.0;
    double sem = 0.0;  // standard error of the mean
    long n = 0;
    std::uint64_t seed = 0;
};

// Pairwise (fixed tree order) summation; result independent of thread count
// because callers always pass values in sample order.
double pairwise_sum(std::span<const double> values);

McEstimate summarize(std::span<const double> values, std::uint64_t seed);

// Runs fn(i) for i in [0, n). With threads <= 1 runs inline; otherwise splits
// into contiguous chunks. fn must write only to its own slot(s).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace uglab
