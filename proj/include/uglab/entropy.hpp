// Metric entropy of group images: the character-based pseudo-metric, two-sided
// covering-number brackets with provenance, the Dudley entropy integral, the
// Sudakov functional, and separated-set construction.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uglab/groups.hpp"
#include "uglab/rational.hpp"
#include "uglab/rng.hpp"

namespace uglab::entropy {

enum class MetricKind { Delta2, DeltaInf, ScaledFrobenius };

// delta^pi(s,t); Delta2 uses (2(1 - Re chi(s^{-1} t)/d))^{1/2} in O(d) for
// structured specs, DeltaInf materializes matrices.
double group_metric(const groups::GroupSpec& spec, const groups::Element& s,
                    const groups::Element& t, MetricKind kind);

// Exact Haar measure of the open delta2 ball of radius eps around the
// identity, when a closed form or enumeration is available.
std::optional<BigRat> ball_measure(const groups::GroupSpec& spec, const BigRat& eps);

struct CoveringCurve {
    std::vector<double> eps;      // increasing, in (0, 2]
    std::vector<BigInt> n_lower;  // bracket on N'(eps), centers in the group
    std::vector<BigInt> n_upper;
    std::vector<std::string> method;  // provenance "lower/upper"
    BigInt group_order;
};

// Brackets per grid point: lower = max(measure bound, packing at 2 eps);
// upper = min(greedy cover, measure bound at eps/2, coset bound, |G|).
CoveringCurve covering_curve(const groups::GroupSpec& spec, const std::vector<double>& eps_grid,
                             MetricKind kind, std::size_t budget);

struct EntropyReport {
    double dudley_lower;
    double dudley_upper;
    double sudakov;
};

EntropyReport dudley_sudakov(const CoveringCurve& curve);

// Greedy maximal packing in rng-shuffled sweep order; pairwise > beta apart.
// Maximal (every element within beta of the result) for enumerable groups,
// best-effort over cap random draws otherwise.
std::vector<groups::Element> separated_set(const groups::GroupSpec& spec, double beta,
                                           MetricKind kind, std::size_t cap, SeededRng& rng);

// 64 geometric points from 2^-6 to 2.
std::vector<double> default_eps_grid();

std::string covering_curve_csv(const CoveringCurve& curve);

}  // namespace uglab::entropy
