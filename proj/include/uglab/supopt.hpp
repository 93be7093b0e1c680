// The supremum oracle Z(u) = sup_{g in G} |tr(u pi(g))|: exact for diagonal
// families, phase-swept maximum linear assignment for (signed) permutation
// families, exhaustive for enumerated groups. Plus Monte Carlo estimators of
// E Z under Gaussian/Haar randomization, the constant C3, and the density
// defect alpha.
#pragma once

#include <span>

#include "uglab/groups.hpp"
#include "uglab/matcore.hpp"
#include "uglab/mc.hpp"
#include "uglab/rng.hpp"

namespace uglab::supopt {

struct LapResult {
    double value;                   // sum_i cost[assignment(i), i]
    groups::Permutation assignment;  // column i -> row assignment.map[i]
};

// Exact maximum-weight perfect matching on a dense d x d matrix
// (shortest augmenting path on negated costs, O(d^3)).
LapResult lap_max(std::span<const double> cost, int d);

struct SupResult {
    double value;             // attained by the witness
    groups::Element witness;
    double phase;             // in [0, 2pi): Re(e^{i phase} tr(u pi(witness))) = value
    double rigorous_error;    // true sup <= value + rigorous_error
};

// tr(u * pi(g)) without materializing pi(g); O(d) for structured specs.
std::complex<double> trace_with(const matcore::CMatrix& u, const groups::GroupSpec& spec,
                                const groups::Element& g);

SupResult sup_abs_trace(const matcore::CMatrix& u, const groups::GroupSpec& spec, int angles);

// Brute force over all group elements (throws DomainError past cap).
SupResult sup_abs_trace_exhaustive(const matcore::CMatrix& u, const groups::GroupSpec& spec,
                                   std::size_t cap);

enum class Randomization { Gaussian, Haar };

McEstimate estimate_EZ(const groups::GroupSpec& spec, Randomization rand, long n_samples,
                       int angles, const SeededRng& base, int threads = 1);

// C3 = d / E_haar Z; delta-method standard error. Requires an irreducible spec.
McEstimate c3_constant(const groups::GroupSpec& spec, long n_samples, int angles,
                       const SeededRng& base, int threads = 1);

struct DensityDefect {
    double alpha;
    groups::Element witness;
    double phase;
};

// Minimal alpha with tr|u - z pi(t)|^2 <= alpha^2 d over t in G, z on the circle.
DensityDefect density_defect(const matcore::CMatrix& u, const groups::GroupSpec& spec, int angles);

int default_angles(int d);

}  // namespace uglab::supopt
