#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"

using namespace uglab;
using namespace uglab::exactcomb;

namespace {

// pe11 alternating-sum form, independent of the recurrence used by the library
BigInt derangements_series(long n) {
    BigRat sum = 0;
    for (long k = 0; k <= n; ++k) {
        BigRat term(BigInt((k % 2) ? -1 : 1), factorial(static_cast<unsigned long>(k)));
        term.canonicalize();
        sum += term;
    }
    sum *= BigRat(factorial(static_cast<unsigned long>(n)));
    sum.canonicalize();
    CHECK(sum.get_den() == 1);
    return BigInt(sum.get_num());
}

long brute_derangements(int n) {
    if (n == 0) return 1;
    long c = 0;
    for (const auto& p : oracles::all_permutations(n))
        if (oracles::count_fixed_points(p) == 0) ++c;
    return c;
}

}  // namespace

TEST_CASE("derangements basics and formula agreement") {
    CHECK(derangements(0) == 1);
    CHECK(derangements(1) == 0);
    CHECK(derangements(4) == 9);
    CHECK(derangements(4) == brute_derangements(4));
    for (long n = 0; n <= 30; ++n) CHECK(derangements(n) == derangements_series(n));
    for (int n = 0; n <= 8; ++n) CHECK(derangements(n) == brute_derangements(n));
    // n!/3 <= D(n) <= n! for n > 1
    for (long n = 2; n <= 30; ++n) {
        CHECK(derangements(n) * 3 >= factorial(n));
        CHECK(derangements(n) <= factorial(n));
    }
    CHECK_THROWS_AS(derangements(-1), DomainError);
}

TEST_CASE("fixed point counts") {
    for (long d : {3L, 5L, 12L}) {
        CHECK(fixed_point_count(d, d) == 1);
        CHECK(fixed_point_count(d, d - 1) == 0);
    }
    CHECK(fixed_point_count(4, 0) == derangements(4));
    // brute-force cross-check for d <= 7
    for (int d = 1; d <= 7; ++d) {
        std::vector<long> counts(d + 1, 0);
        for (const auto& p : oracles::all_permutations(d)) ++counts[oracles::count_fixed_points(p)];
        for (long j = 0; j <= d; ++j) CHECK(fixed_point_count(d, j) == counts[j]);
    }
    // partition of S(d): sum_j X_j = d!
    for (long d = 1; d <= 12; ++d) {
        BigInt total = 0;
        for (long j = 0; j <= d; ++j) total += fixed_point_count(d, j);
        CHECK(total == factorial(static_cast<unsigned long>(d)));
    }
    // pe12: X_j / d! <= 1/j!
    for (long d = 1; d <= 12; ++d)
        for (long j = 0; j <= d; ++j)
            CHECK(fixed_point_count(d, j) * factorial(static_cast<unsigned long>(j)) <=
                  factorial(static_cast<unsigned long>(d)));
    CHECK_THROWS_AS(fixed_point_count(4, 5), DomainError);
    CHECK_THROWS_AS(fixed_point_count(4, -1), DomainError);
}

TEST_CASE("pe13 factorial tail bounds in floating point") {
    const int d = 20;
    for (int k = 1; k <= d; ++k) {
        double tail = 0.0;
        for (int j = k; j <= 60; ++j) tail += std::exp(-log_bigint(factorial(j)));
        const double ek = std::exp(1.0 - log_bigint(factorial(k)));
        CHECK(tail <= ek * (1 + 1e-12));
        CHECK(ek <= std::exp(1.0) * std::pow(std::exp(1.0) / k, k) * (1 + 1e-12));
    }
}

TEST_CASE("sign sum tails") {
    CHECK(sign_sum_tail(1, 0) == BigRat(1, 2));
    CHECK(sign_sum_tail(2, 1) == BigRat(1, 4));
    CHECK(sign_sum_tail(3, 5) == 0);
    CHECK(sign_sum_tail(3, -4) == 1);
    CHECK(sign_sum_tail(0, -1) == 1);
    CHECK(sign_sum_tail(0, 0) == 0);
    // P(S_d > k) >= 2^{-d} for 0 <= k < d
    for (long d = 1; d <= 12; ++d)
        for (long k = 0; k < d; ++k)
            CHECK(sign_sum_tail(d, k) * pow2(static_cast<unsigned long>(d)) >= 1);
    // brute enumeration at j = 4
    for (long k = -5; k <= 5; ++k) {
        long hits = 0;
        for (int mask = 0; mask < 16; ++mask) {
            long s = 0;
            for (int i = 0; i < 4; ++i) s += (mask >> i) & 1 ? 1 : -1;
            if (s > k) ++hits;
        }
        BigRat expect(hits, 16);
        expect.canonicalize();
        CHECK(sign_sum_tail(4, k) == expect);
    }
}

TEST_CASE("character tail of the hyperoctahedral group") {
    CHECK(char_tail_hyperoct(2, 1) == BigRat(1, 8));
    CHECK(char_tail_hyperoct(5, 5) == 0);
    CHECK(char_tail_hyperoct(3, 7) == 0);
    // full enumeration for d = 2, 3
    for (int d = 2; d <= 3; ++d) {
        const auto perms = oracles::all_permutations(d);
        for (long k = -d - 1; k <= d; ++k) {
            long hits = 0;
            for (const auto& p : perms) {
                for (int mask = 0; mask < (1 << d); ++mask) {
                    long tr = 0;
                    for (int i = 0; i < d; ++i)
                        if (p[i] == i) tr += (mask >> i) & 1 ? -1 : 1;
                    if (tr > k) ++hits;
                }
            }
            BigRat expect(hits, factorial(d) * pow2(d));
            expect.canonicalize();
            CHECK(char_tail_hyperoct(d, k) == expect);
        }
    }
    // pe31 sandwich: (d!)^{-1} 2^{-d} <= tail <= e (e/(k+1))^{k+1}
    for (long d = 1; d <= 12; ++d) {
        const BigRat lower(BigInt(1), factorial(static_cast<unsigned long>(d)) *
                                          pow2(static_cast<unsigned long>(d)));
        for (long k = 0; k < d; ++k) {
            const BigRat tail = char_tail_hyperoct(d, k);
            CHECK(tail >= lower);
            const double upper = std::exp(1.0) * std::pow(std::exp(1.0) / (k + 1), k + 1);
            CHECK(tail.get_d() <= upper * (1 + 1e-12));
        }
    }
}

TEST_CASE("exact character distribution") {
    const ExactDist d2 = char_dist_hyperoct(2);
    REQUIRE(d2.support == std::vector<long>{-2, 0, 2});
    CHECK(d2.probs[0] == BigRat(1, 8));
    CHECK(d2.probs[1] == BigRat(3, 4));
    CHECK(d2.probs[2] == BigRat(1, 8));

    for (long d : {1L, 2L, 3L, 5L, 8L, 12L}) {
        const ExactDist dist = char_dist_hyperoct(d);
        // P(tr = d) = 1/(d! 2^d): only the identity
        CHECK(dist.support.back() == d);
        BigRat idmass(BigInt(1), factorial(static_cast<unsigned long>(d)) *
                                     pow2(static_cast<unsigned long>(d)));
        idmass.canonicalize();
        CHECK(dist.probs.back() == idmass);
        // symmetric under m -> -m (global sign flip)
        for (std::size_t i = 0; i < dist.support.size(); ++i) {
            const long m = dist.support[i];
            bool found = false;
            for (std::size_t j = 0; j < dist.support.size(); ++j)
                if (dist.support[j] == -m && dist.probs[j] == dist.probs[i]) found = true;
            CHECK(found);
        }
        // tail sums reproduce char_tail_hyperoct exactly
        for (long k = -d - 1; k <= d; ++k) CHECK(dist.tail_gt(k) == char_tail_hyperoct(d, k));
    }
}

TEST_CASE("ball measure") {
    CHECK(ball_measure_hyperoct(2, BigRat(1)) == BigRat(1, 8));
    CHECK(ball_measure_hyperoct(2, BigRat(1)) == char_tail_hyperoct(2, 1));
    // eps > 2: the whole group
    CHECK(ball_measure_hyperoct(3, BigRat(5, 2)) == 1);
    // eps = 2 exactly: the open ball misses -1
    BigRat expect = 1 - BigRat(BigInt(1), factorial(3) * pow2(3));
    expect.canonicalize();
    CHECK(ball_measure_hyperoct(3, BigRat(2)) == expect);
    // lower bound from pe31 for eps < 2
    for (long d = 1; d <= 10; ++d) {
        const BigRat eps(3, 2);
        CHECK(ball_measure_hyperoct(d, eps) *
                  (factorial(static_cast<unsigned long>(d)) * pow2(static_cast<unsigned long>(d))) >=
              1);
    }
    // integer-threshold boundary: d=4, eps^2/2 = 1/2 -> threshold 2, strict
    CHECK(ball_measure_hyperoct(4, BigRat(1)) == char_tail_hyperoct(4, 2));
    CHECK_THROWS_AS(ball_measure_hyperoct(3, BigRat(0)), DomainError);
    CHECK_THROWS_AS(ball_measure_hyperoct(3, BigRat(-1)), DomainError);

    // float wrapper upper-bounds the exact measure
    for (double e : {0.3, 0.7, 1.0, 1.3}) {
        const BigRat exact = ball_measure_hyperoct(6, rat_from_double(e));
        CHECK(ball_measure_hyperoct_upper(6, e) >= exact);
    }
}

TEST_CASE("ExactDist validation") {
    CHECK_THROWS_AS(ExactDist({1, 1}, {BigRat(1, 2), BigRat(1, 2)}), DomainError);
    CHECK_THROWS_AS(ExactDist({1, 2}, {BigRat(1, 2), BigRat(1, 3)}), DomainError);
    CHECK_THROWS_AS(ExactDist({2, 1}, {BigRat(1, 2), BigRat(1, 2)}), DomainError);
}
