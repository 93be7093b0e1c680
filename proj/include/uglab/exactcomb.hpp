// Exact combinatorics of the hyperoctahedral group {-1,1}^d x| S(d):
// derangements, fixed-point counts, sign-sum tails, and the exact character
// distribution, all in arbitrary-precision rational arithmetic.
#pragma once

#include <vector>

#include "uglab/rational.hpp"

namespace uglab::exactcomb {

// Discrete distribution over integer values with exact probabilities.
struct ExactDist {
    std::vector<long> support;  // strictly increasing
    std::vector<BigRat> probs;  // same length, nonnegative, sums to exactly 1

    ExactDist(std::vector<long> support_, std::vector<BigRat> probs_);

    // P(X > k), exact.
    BigRat tail_gt(long k) const;
    long max_abs() const;
};

// D(n): permutations of n elements without fixed points. D(0) = 1.
BigInt derangements(long n);

// X_j: permutations of S(d) with exactly j fixed points, X_j = C(d,j) D(d-j).
BigInt fixed_point_count(long d, long j);

// P(S_j > k) where S_j is a sum of j independent uniform signs.
BigRat sign_sum_tail(long j, long k);

// Haar measure of {u : tr(u) > k} on the hyperoctahedral group of dimension d.
BigRat char_tail_hyperoct(long d, long k);

// Exact law of tr(u) for u uniform on the hyperoctahedral group.
ExactDist char_dist_hyperoct(long d);

// Haar measure of the open ball {u : delta2(u, 1) < eps}, i.e. of
// {u : tr(u) > d(1 - eps^2/2)} with the strict inequality taken literally.
BigRat ball_measure_hyperoct(long d, const BigRat& eps);

// Float convenience: rounds the trace threshold downward, so the result is an
// upper bound on the exact ball measure.
BigRat ball_measure_hyperoct_upper(long d, double eps);

}  // namespace uglab::exactcomb
