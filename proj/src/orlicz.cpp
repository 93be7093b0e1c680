#include "uglab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "uglab/error.hpp"
#include "uglab/matcore.hpp"

namespace uglab::orlicz {

namespace {

struct Atom {
    double value;     // |F| >= 0
    double prob;
    double log_prob;  // terms evaluated as exp(x + log p) - p to dodge overflow
};

double orlicz_integral(const std::vector<Atom>& atoms, double c) {
    double s = 0.0;
    for (const Atom& a : atoms) {
        if (a.value == 0.0) continue;
        const double x = (a.value / c) * (a.value / c);
        s += std::exp(x + a.log_prob) - a.prob;
        if (std::isinf(s)) return s;
    }
    return s;
}

Psi2Result solve(std::vector<Atom> atoms) {
    Psi2Result res;
    double vmax = 0.0;
    for (const Atom& a : atoms) vmax = std::max(vmax, a.value);
    if (vmax == 0.0) return res;  // degenerate all-zero distribution

    const double target = std::exp(1.0) - 1.0;
    // At c = vmax the integral is <= (e-1) sum p = target, so vmax brackets
    // from above; halve downward until the integral crosses the target.
    double hi = vmax;
    double lo = vmax;
    int iters = 0;
    while (orlicz_integral(atoms, lo) < target) {
        lo /= 2;
        if (++iters > 2100) throw NumericError("psi2: bracketing failed", lo);
    }
    if (lo == hi) {
        // point mass at vmax: the infimum is exactly vmax
        res.norm = vmax;
        res.lo = res.hi = vmax;
        res.iterations = iters;
        return res;
    }
    while (hi - lo > 1e-9 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (orlicz_integral(atoms, mid) >= target)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }
    res.lo = lo;
    res.hi = hi;
    res.norm = 0.5 * (lo + hi);
    res.iterations = iters;
    return res;
}

}  // namespace

Psi2Result psi2_weighted(std::span<const double> abs_values, std::span<const double> probs) {
    if (abs_values.size() != probs.size() || abs_values.empty())
        throw DomainError("psi2_weighted: bad value/prob lists");
    std::vector<Atom> atoms;
    atoms.reserve(abs_values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < abs_values.size(); ++i) {
        if (probs[i] < 0) throw DomainError("psi2_weighted: negative probability");
        total += probs[i];
        if (probs[i] == 0.0) continue;
        atoms.push_back({std::abs(abs_values[i]), probs[i], std::log(probs[i])});
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("psi2_weighted: probabilities must sum to 1");
    return solve(std::move(atoms));
}

Psi2Result psi2_exact(const exactcomb::ExactDist& dist) {
    std::vector<double> vals, probs;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        vals.push_back(std::abs(static_cast<double>(dist.support[i])));
        probs.push_back(dist.probs[i].get_d());
    }
    return psi2_weighted(vals, probs);
}

Psi2Result psi2_empirical(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("psi2_empirical: need at least one sample");
    std::map<double, long> counts;
    for (double s : samples) ++counts[std::abs(s)];
    std::vector<double> vals, probs;
    for (const auto& [v, c] : counts) {
        vals.push_back(v);
        probs.push_back(static_cast<double>(c) / static_cast<double>(samples.size()));
    }
    return psi2_weighted(vals, probs);
}

double moment_ratio(const exactcomb::ExactDist& dist, int n_max) {
    if (n_max < 1) throw DomainError("moment_ratio: n_max must be >= 1");
    double best = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        BigRat moment = 0;
        for (std::size_t i = 0; i < dist.support.size(); ++i) {
            BigInt p;
            mpz_ui_pow_ui(p.get_mpz_t(),
                          static_cast<unsigned long>(std::labs(dist.support[i])),
                          static_cast<unsigned long>(2 * n));
            moment += dist.probs[i] * BigRat(p);
        }
        if (moment <= 0) continue;
        const double val = std::exp(log_rat(moment) / (2.0 * n)) / std::sqrt(2.0 * n);
        best = std::max(best, val);
    }
    return best;
}

Psi2Result c2_constant(const groups::GroupSpec& spec, std::size_t tab_cap) {
    const int d = groups::dimension(spec);
    if (const auto* h = std::get_if<groups::HyperOct>(&spec))
        return psi2_exact(exactcomb::char_dist_hyperoct(h->d));
    if (std::get_if<groups::SymmetricAsUnitary>(&spec)) {
        // chi = number of fixed points, P(chi = j) = X_j / d!
        const BigInt dfac = factorial(static_cast<unsigned long>(d));
        std::vector<long> support;
        std::vector<BigRat> probs;
        for (long j = 0; j <= d; ++j) {
            const BigInt xj = exactcomb::fixed_point_count(d, j);
            if (xj == 0) continue;
            support.push_back(j);
            BigRat p(xj, dfac);
            p.canonicalize();
            probs.push_back(p);
        }
        return psi2_exact(exactcomb::ExactDist(std::move(support), std::move(probs)));
    }
    if (std::get_if<groups::DiagSign>(&spec)) {
        // chi = sum of d signs: binomial law on {-d, -d+2, ..., d}
        std::vector<long> support;
        std::vector<BigRat> probs;
        const BigInt den = pow2(static_cast<unsigned long>(d));
        for (long r = 0; r <= d; ++r) {
            support.push_back(d - 2 * r);
            BigRat p(binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(r)), den);
            p.canonicalize();
            probs.push_back(p);
        }
        std::reverse(support.begin(), support.end());
        std::reverse(probs.begin(), probs.end());
        return psi2_exact(exactcomb::ExactDist(std::move(support), std::move(probs)));
    }
    if (std::get_if<groups::DiagRoots>(&spec)) {
        if (groups::group_order(spec) > BigInt(static_cast<unsigned long>(tab_cap)))
            throw UnsupportedSpecError(
                "c2_constant: spec has no exact distribution and is too large to enumerate");
        std::vector<double> vals, probs;
        const auto elems = groups::enumerate_elements(spec, tab_cap);
        const double w = 1.0 / static_cast<double>(elems.size());
        for (const auto& g : elems) {
            vals.push_back(std::abs(groups::character(spec, g)));
            probs.push_back(w);
        }
        return psi2_weighted(vals, probs);
    }
    const auto& en = std::get<groups::Enumerated>(spec);
    std::vector<double> vals, probs;
    const double w = 1.0 / static_cast<double>(en.data->size());
    for (const auto& m : en.data->elements()) {
        vals.push_back(std::abs(matcore::trace(m)));
        probs.push_back(w);
    }
    return psi2_weighted(vals, probs);
}

}  // namespace uglab::orlicz
