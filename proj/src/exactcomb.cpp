#include "uglab/exactcomb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "uglab/error.hpp"

namespace uglab::exactcomb {

ExactDist::ExactDist(std::vector<long> support_, std::vector<BigRat> probs_)
    : support(std::move(support_)), probs(std::move(probs_)) {
    if (support.size() != probs.size())
        throw DomainError("ExactDist: support/probs length mismatch");
    BigRat total = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i > 0 && support[i] <= support[i - 1])
            throw DomainError("ExactDist: support must be strictly increasing");
        if (probs[i] < 0) throw DomainError("ExactDist: negative probability");
        total += probs[i];
    }
    if (total != 1) throw DomainError("ExactDist: probabilities must sum to 1");
}

BigRat ExactDist::tail_gt(long k) const {
    BigRat t = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] > k) t += probs[i];
    return t;
}

long ExactDist::max_abs() const {
    long m = 0;
    for (long v : support) m = std::max(m, std::labs(v));
    return m;
}

BigInt derangements(long n) {
    if (n < 0) throw DomainError("derangements: n must be >= 0");
    // D(n) = (n-1)(D(n-1) + D(n-2)), D(0) = 1, D(1) = 0.
    BigInt prev2 = 1, prev1 = 0;
    if (n == 0) return prev2;
    if (n == 1) return prev1;
    BigInt cur;
    for (long m = 2; m <= n; ++m) {
        cur = BigInt(m - 1) * (prev1 + prev2);
        prev2 = prev1;
        prev1 = cur;
    }
    return cur;
}

BigInt fixed_point_count(long d, long j) {
    if (d < 1) throw DomainError("fixed_point_count: d must be >= 1");
    if (j < 0 || j > d) throw DomainError("fixed_point_count: j out of range [0, d]");
    return binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(j)) *
           derangements(d - j);
}

BigRat sign_sum_tail(long j, long k) {
    if (j < 0) throw DomainError("sign_sum_tail: j must be >= 0");
    if (k >= j) return BigRat(0);
    if (k < -j) return BigRat(1);
    // S_j = 2B - j with B ~ Binomial(j, 1/2); S_j > k iff 2b - j > k.
    BigInt count = 0;
    for (long b = 0; b <= j; ++b)
        if (2 * b - j > k)
            count += binomial(static_cast<unsigned long>(j), static_cast<unsigned long>(b));
    BigRat p(count, pow2(static_cast<unsigned long>(j)));
    p.canonicalize();
    return p;
}

BigRat char_tail_hyperoct(long d, long k) {
    if (d < 1) throw DomainError("char_tail_hyperoct: d must be >= 1");
    if (k >= d) return BigRat(0);
    BigRat sum = 0;
    for (long j = std::max(0L, k + 1); j <= d; ++j)
        sum += BigRat(fixed_point_count(d, j)) * sign_sum_tail(j, k);
    BigRat p = sum / BigRat(factorial(static_cast<unsigned long>(d)));
    p.canonicalize();
    return p;
}

ExactDist char_dist_hyperoct(long d) {
    if (d < 1) throw DomainError("char_dist_hyperoct: d must be >= 1");
    const BigInt dfac = factorial(static_cast<unsigned long>(d));
    std::vector<long> support;
    std::vector<BigRat> probs;
    for (long m = -d; m <= d; ++m) {
        // tr = S_j conditioned on j fixed points; parity of S_j matches j.
        BigRat p = 0;
        for (long j = std::labs(m); j <= d; ++j) {
            if ((j + m) % 2 != 0) continue;
            BigInt ways = fixed_point_count(d, j) *
                          binomial(static_cast<unsigned long>(j),
                                   static_cast<unsigned long>((j + m) / 2));
            p += BigRat(ways, dfac * pow2(static_cast<unsigned long>(j)));
        }
        p.canonicalize();
        if (p > 0) {
            support.push_back(m);
            probs.push_back(p);
        }
    }
    return ExactDist(std::move(support), std::move(probs));
}

BigRat ball_measure_hyperoct(long d, const BigRat& eps) {
    if (d < 1) throw DomainError("ball_measure_hyperoct: d must be >= 1");
    if (eps <= 0) throw DomainError("ball_measure_hyperoct: eps must be > 0");
    // {delta2(u,1) < eps} = {tr(u) > d(1 - eps^2/2)}; for integer traces,
    // tr > t iff tr > floor(t), whether or not t is an integer.
    const BigRat threshold = BigRat(d) * (1 - eps * eps / 2);
    const BigInt kf = floor_rat(threshold);
    if (kf >= d) return BigRat(0);
    if (kf < -d) return BigRat(1);
    return char_tail_hyperoct(d, kf.get_si());
}

BigRat ball_measure_hyperoct_upper(long d, double eps) {
    if (d < 1) throw DomainError("ball_measure_hyperoct_upper: d must be >= 1");
    if (!(eps > 0)) throw DomainError("ball_measure_hyperoct_upper: eps must be > 0");
    double t = static_cast<double>(d) * (1.0 - eps * eps / 2.0);
    t = std::nextafter(t, -1e300);  // round the threshold down: measure can only grow
    const double kf = std::floor(t);
    if (kf >= static_cast<double>(d)) return BigRat(0);
    if (kf < -static_cast<double>(d)) return BigRat(1);
    return char_tail_hyperoct(d, static_cast<long>(kf));
}

}  // namespace uglab::exactcomb
