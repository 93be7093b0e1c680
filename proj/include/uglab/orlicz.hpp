// psi_2 (subgaussian) Orlicz norms from exact distributions and from samples,
// the moment-ratio equivalent, and the character constant C2.
#pragma once

#include <span>

#include "uglab/exactcomb.hpp"
#include "uglab/groups.hpp"

namespace uglab::orlicz {

struct Psi2Result {
    double norm = 0.0;
    double lo = 0.0, hi = 0.0;  // bisection bracket, hi - lo <= 1e-9 max(1, norm)
    int iterations = 0;
};

// ||F||_{psi2} = inf{c : E(e^{(|F|/c)^2} - 1) <= e - 1} for a weighted
// discrete |F|; probabilities must sum to 1.
Psi2Result psi2_weighted(std::span<const double> abs_values, std::span<const double> probs);

Psi2Result psi2_exact(const exactcomb::ExactDist& dist);

Psi2Result psi2_empirical(std::span<const double> samples);

// max over 1 <= n <= n_max of ||F||_{2n} / sqrt(2n), exact moments in
// rationals with one floating root at the end.
double moment_ratio(const exactcomb::ExactDist& dist, int n_max);

// C2 = psi2 norm of |chi| under the uniform measure; exact distribution for
// structured specs, tabulation for enumerated ones.
Psi2Result c2_constant(const groups::GroupSpec& spec, std::size_t tab_cap = 1 << 20);

}  // namespace uglab::orlicz
