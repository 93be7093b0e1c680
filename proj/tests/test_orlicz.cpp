#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"
#include "uglab/groups.hpp"
#include "uglab/orlicz.hpp"
#include "uglab/rng.hpp"

using namespace uglab;
using namespace uglab::orlicz;
using exactcomb::ExactDist;
using groups::GroupSpec;

namespace {

// recompute the Orlicz integral independently of the solver internals
double integral_at(const ExactDist& dist, double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const double v = std::abs(static_cast<double>(dist.support[i]));
        if (v == 0.0) continue;
        s += dist.probs[i].get_d() * (std::exp((v / c) * (v / c)) - 1.0);
    }
    return s;
}

}  // namespace

TEST_CASE("psi2 closed forms") {
    // point mass at a: norm = a
    for (double a : {0.5, 1.0, 7.0}) {
        const auto r = psi2_weighted(std::vector<double>{a}, std::vector<double>{1.0});
        CHECK(r.norm == doctest::Approx(a).epsilon(1e-9));
    }
    // Rademacher: |F| == 1
    const ExactDist rad({-1, 1}, {BigRat(1, 2), BigRat(1, 2)});
    CHECK(psi2_exact(rad).norm == doctest::Approx(1.0).epsilon(1e-9));
    // uniform on {0, 2}: c = 2 / sqrt(ln(2e - 1))
    const ExactDist two({0, 2}, {BigRat(1, 2), BigRat(1, 2)});
    const double expect = 2.0 / std::sqrt(std::log(2.0 * std::exp(1.0) - 1.0));
    CHECK(psi2_exact(two).norm == doctest::Approx(expect).epsilon(1e-9));
    CHECK(expect == doctest::Approx(1.6385).epsilon(1e-4));
    // all-zero distribution
    const ExactDist zero({0}, {BigRat(1)});
    CHECK(psi2_exact(zero).norm == 0.0);
}

TEST_CASE("psi2 bisection certificate") {
    for (long d : {4L, 8L, 16L}) {
        const ExactDist dist = exactcomb::char_dist_hyperoct(d);
        const auto r = psi2_exact(dist);
        CHECK(r.hi - r.lo <= 1e-9 * std::max(1.0, r.norm));
        const double target = std::exp(1.0) - 1.0;
        CHECK(integral_at(dist, r.lo) >= target * (1 - 1e-9));
        CHECK(integral_at(dist, r.hi) <= target * (1 + 1e-9));
    }
}

TEST_CASE("psi2 empirical") {
    // constant samples
    std::vector<double> constant(100, 3.25);
    CHECK(psi2_empirical(constant).norm == doctest::Approx(3.25).epsilon(1e-9));
    // scaling equivariance
    SeededRng rng(5);
    std::vector<double> samples(500);
    for (auto& s : samples) s = rng.gaussian();
    const double base = psi2_empirical(samples).norm;
    std::vector<double> scaled = samples;
    for (auto& s : scaled) s *= 3.0;
    CHECK(psi2_empirical(scaled).norm == doctest::Approx(3.0 * base).epsilon(1e-9));
    CHECK_THROWS_AS(psi2_empirical(std::vector<double>{}), DomainError);

    // sampled characters approach the exact norm within 10% at 1e5 samples
    for (int d : {4, 8}) {
        const GroupSpec spec = groups::HyperOct{d};
        SeededRng r(271828);
        std::vector<double> chars(100000);
        for (auto& c : chars) c = groups::character(spec, groups::sample_uniform(spec, r)).real();
        const double emp = psi2_empirical(chars).norm;
        const double exact = psi2_exact(exactcomb::char_dist_hyperoct(d)).norm;
        CHECK(std::abs(emp - exact) <= 0.10 * exact);
    }
}

TEST_CASE("moment ratio") {
    // point mass at 1: max_n 1/sqrt(2n) = 1/sqrt(2)
    const ExactDist one({1}, {BigRat(1)});
    CHECK(moment_ratio(one, 64) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // stabilization for bounded characters: the sup sits at moderate n
    // (argmax is 15 at d=8, 27 at d=12, 41 at d=16)
    for (long d : {4L, 8L, 12L}) {
        const ExactDist dist = exactcomb::char_dist_hyperoct(d);
        CHECK(moment_ratio(dist, 32) == moment_ratio(dist, 64));
    }
    const ExactDist d16 = exactcomb::char_dist_hyperoct(16);
    CHECK(moment_ratio(d16, 64) == moment_ratio(d16, 128));
    // se3 equivalence band: ratio to psi2 within [1/4, 4]
    for (long d : {4L, 8L, 16L}) {
        const ExactDist dist = exactcomb::char_dist_hyperoct(d);
        const double ratio = moment_ratio(dist, 64) / psi2_exact(dist).norm;
        CHECK(ratio >= 0.25);
        CHECK(ratio <= 4.0);
    }
}

TEST_CASE("c2 constants per family") {
    // trivial group in U(d): character is a point mass at d
    const auto triv = groups::enumerate_closure({matcore::CMatrix::identity(3)}, 1e-9, 4);
    CHECK(c2_constant(GroupSpec(triv.spec)).norm == doctest::Approx(3.0).epsilon(1e-9));

    // DiagSign: C2 / sqrt(d) in a fixed band across d (Rademacher sums)
    std::vector<double> ratios;
    for (int d : {16, 64, 256})
        ratios.push_back(c2_constant(GroupSpec(groups::DiagSign{d})).norm / std::sqrt(d));
    for (double r : ratios) {
        CHECK(r >= ratios.front() / 2.0);
        CHECK(r <= ratios.front() * 2.0);
    }

    // HyperOct: C2 / sqrt(d / ln d) stable within a factor 2 across d
    std::vector<double> hr;
    for (int d : {8, 16, 32, 64})
        hr.push_back(c2_constant(GroupSpec(groups::HyperOct{d})).norm /
                     std::sqrt(d / std::log(static_cast<double>(d))));
    CHECK(*std::max_element(hr.begin(), hr.end()) /
              *std::min_element(hr.begin(), hr.end()) <=
          2.0);

    // DiagRoots via tabulation; too-large spec raises the unsupported error
    CHECK(c2_constant(GroupSpec(groups::DiagRoots{1, 8})).norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c2_constant(GroupSpec(groups::DiagRoots{3, 4})).norm > 0.0);
    CHECK_THROWS_AS((void)c2_constant(GroupSpec(groups::DiagRoots{30, 16})),
                    UnsupportedSpecError);

    // Sym: distribution of fixed-point counts
    const double sym4 = c2_constant(GroupSpec(groups::SymmetricAsUnitary{4})).norm;
    CHECK(sym4 > 1.0);
    CHECK(sym4 < 4.0);
}

TEST_CASE("lp2 lower bound with c' calibrated at d = 8") {
    // C2 >= c' min(sqrt d, d / sqrt(log k)) with k = d!
    auto rhs_raw = [](int d) {
        const double lk = log_bigint(factorial(static_cast<unsigned long>(d)));
        return std::min(std::sqrt(static_cast<double>(d)), d / std::sqrt(lk));
    };
    const double cal = c2_constant(GroupSpec(groups::HyperOct{8})).norm / rhs_raw(8);
    for (int d : {16, 32, 64}) {
        const double c2 = c2_constant(GroupSpec(groups::HyperOct{d})).norm;
        CHECK(c2 >= cal * rhs_raw(d) - 1e-9);
    }
}

TEST_CASE("weighted input validation") {
    CHECK_THROWS_AS(psi2_weighted(std::vector<double>{1.0}, std::vector<double>{0.5}),
                    DomainError);
    CHECK_THROWS_AS(psi2_weighted(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}),
                    DomainError);
}
