#include "uglab/supopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uglab/error.hpp"
#include "uglab/randmat.hpp"

namespace uglab::supopt {

using groups::Element;
using groups::GroupSpec;
using matcore::CMatrix;
using matcore::cplx;

LapResult lap_max(std::span<const double> cost, int d) {
    if (d < 1) throw DomainError("lap_max: d must be >= 1");
    if (cost.size() != static_cast<std::size_t>(d) * d)
        throw DomainError("lap_max: cost must be d*d entries");
    for (double c : cost)
        if (!std::isfinite(c)) throw DomainError("lap_max: non-finite cost entry");

    // Jonker-Volgenant style shortest augmenting path, minimizing -cost.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(d + 1, 0.0), v(d + 1, 0.0);
    std::vector<int> p(d + 1, 0), way(d + 1, 0);
    auto c = [&](int i, int j) { return -cost[static_cast<std::size_t>(i) * d + j]; };

    for (int i = 1; i <= d; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(d + 1, inf);
        std::vector<char> used(d + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= d; ++j) {
                if (used[j]) continue;
                const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= d; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    LapResult res;
    res.assignment.map.resize(d);
    for (int j = 1; j <= d; ++j) res.assignment.map[j - 1] = p[j] - 1;
    double val = 0.0;
    for (int j = 0; j < d; ++j)
        val += cost[static_cast<std::size_t>(res.assignment.map[j]) * d + j];
    res.value = val;
    return res;
}

std::complex<double> trace_with(const CMatrix& u, const GroupSpec& spec, const Element& g) {
    const int d = u.dim();
    if (d != groups::dimension(spec)) throw DomainError("trace_with: dimension mismatch");
    if (std::get_if<groups::HyperOct>(&spec)) {
        const auto& e = std::get<groups::SignedPerm>(g);
        cplx s = 0.0;
        for (int i = 0; i < d; ++i)
            s += static_cast<double>(e.signs[i]) * u(e.perm.map[i], i);
        return s;
    }
    if (std::get_if<groups::SymmetricAsUnitary>(&spec)) {
        const auto& e = std::get<groups::Permutation>(g);
        cplx s = 0.0;
        for (int i = 0; i < d; ++i) s += u(e.map[i], i);
        return s;
    }
    if (std::get_if<groups::DiagSign>(&spec)) {
        const auto& e = std::get<groups::SignVector>(g);
        cplx s = 0.0;
        for (int i = 0; i < d; ++i) s += static_cast<double>(e.signs[i]) * u(i, i);
        return s;
    }
    if (const auto* r = std::get_if<groups::DiagRoots>(&spec)) {
        const auto& e = std::get<groups::RootVector>(g);
        cplx s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double a = 2.0 * M_PI * e.exps[i] / r->n;
            s += cplx(std::cos(a), std::sin(a)) * u(i, i);
        }
        return s;
    }
    const auto& en = std::get<groups::Enumerated>(spec);
    const auto& e = std::get<groups::EnumIndex>(g);
    const CMatrix& m = en.data->element(e.index);
    cplx s = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += u(i, j) * m(j, i);
    return s;
}

namespace {

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    return a < 0 ? a + 2.0 * M_PI : a;
}

// phase with Re(e^{i phase} w) = |w|
double phase_of(cplx w) { return w == cplx(0.0, 0.0) ? 0.0 : wrap_2pi(-std::arg(w)); }

struct GridBest {
    double value = -1.0;
    double theta = 0.0;
};

// Golden-section refinement of fn on [lo, hi]; returns the best evaluated point.
GridBest golden_max(const std::function<double(double)>& fn, double lo, double hi, int iters) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    GridBest best;
    auto note = [&](double v, double t) {
        if (v > best.value) {
            best.value = v;
            best.theta = t;
        }
    };
    note(f1, x1);
    note(f2, x2);
    for (int k = 0; k < iters; ++k) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = fn(x2);
            note(f2, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = fn(x1);
            note(f1, x1);
        }
    }
    return best;
}

// Shared sweep for the two permutation families. abs_cost selects
// |Re(e^{i theta} u_ji)| (signed permutations) vs Re(e^{i theta} u_ji).
struct SweepResult {
    double theta;
    groups::Permutation assignment;
    double rigorous_error;
};

SweepResult phase_sweep(const CMatrix& u, int angles, bool abs_cost, double period) {
    const int d = u.dim();
    if (angles < 4) throw DomainError("sup_abs_trace: angles must be >= 4");
    const double h = period / angles;
    std::vector<double> cost(static_cast<std::size_t>(d) * d);
    auto lap_at = [&](double th) {
        const double c = std::cos(th), s = std::sin(th);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                const cplx z = u(j, i);
                const double re = c * z.real() - s * z.imag();
                cost[static_cast<std::size_t>(j) * d + i] = abs_cost ? std::abs(re) : re;
            }
        }
        return lap_max(cost, d);
    };
    // coarse grid
    std::vector<std::pair<double, double>> top;  // (value, theta), keep best 3
    for (int m = 0; m < angles; ++m) {
        const double th = h * m;
        const double val = lap_at(th).value;
        top.emplace_back(val, th);
        std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.first > b.first; });
        if (top.size() > 3) top.pop_back();
    }
    // refine inside the winning cells; improves the witness, never the bound
    GridBest best{top[0].first, top[0].second};
    for (const auto& [val, th] : top) {
        (void)val;
        const GridBest g = golden_max([&](double t) { return lap_at(t).value; },
                                      th - h, th + h, 24);
        if (g.value > best.value) best = g;
    }
    SweepResult out;
    out.theta = best.theta;
    out.assignment = lap_at(best.theta).assignment;
    out.rigorous_error = h * std::sqrt(static_cast<double>(d)) * matcore::frobenius(u);
    return out;
}

// Exact maximization over diagonal families: between consecutive breakpoints
// the per-coordinate argmax pattern is constant, and for a fixed pattern the
// phase is free, so the sup is the max of |sum_i z_i w_i| over the patterns.
SupResult sup_diag_sign(const CMatrix& u) {
    const int d = u.dim();
    std::vector<cplx> z(d);
    std::vector<double> bps;
    for (int i = 0; i < d; ++i) {
        z[i] = u(i, i);
        if (std::abs(z[i]) > 0) bps.push_back(wrap_2pi(M_PI / 2 - std::arg(z[i])));
    }
    for (double& b : bps) b = std::fmod(b, M_PI);
    std::sort(bps.begin(), bps.end());
    SupResult res;
    res.rigorous_error = 0.0;
    if (bps.empty()) {
        res.value = 0.0;
        res.phase = 0.0;
        res.witness = groups::SignVector{std::vector<std::int8_t>(d, 1)};
        return res;
    }
    double best = -1.0;
    std::vector<std::int8_t> best_signs;
    cplx best_w;
    for (std::size_t k = 0; k < bps.size(); ++k) {
        const double a = bps[k];
        const double b = k + 1 < bps.size() ? bps[k + 1] : bps[0] + M_PI;
        const double mid = (a + b) / 2;
        std::vector<std::int8_t> s(d, 1);
        cplx w = 0.0;
        for (int i = 0; i < d; ++i) {
            const double re = std::cos(mid) * z[i].real() - std::sin(mid) * z[i].imag();
            s[i] = re >= 0 ? std::int8_t(1) : std::int8_t(-1);
            w += static_cast<double>(s[i]) * z[i];
        }
        if (std::abs(w) > best) {
            best = std::abs(w);
            best_signs = std::move(s);
            best_w = w;
        }
    }
    res.value = best;
    res.phase = phase_of(best_w);
    res.witness = groups::SignVector{std::move(best_signs)};
    return res;
}

SupResult sup_diag_roots(const CMatrix& u, int n) {
    const int d = u.dim();
    std::vector<cplx> z(d);
    std::vector<double> bps;
    for (int i = 0; i < d; ++i) {
        z[i] = u(i, i);
        if (std::abs(z[i]) > 0 && n >= 2)
            for (int k = 0; k < n; ++k)
                bps.push_back(wrap_2pi(M_PI / n + 2.0 * M_PI * k / n - std::arg(z[i])));
    }
    std::sort(bps.begin(), bps.end());
    auto pattern_at = [&](double th) {
        std::vector<int> e(d, 0);
        cplx w = 0.0;
        for (int i = 0; i < d; ++i) {
            if (std::abs(z[i]) > 0 && n >= 2) {
                // argmax_e cos(th + arg z_i + 2 pi e / n)
                const double t = -(th + std::arg(z[i])) * n / (2.0 * M_PI);
                int ei = static_cast<int>(std::llround(t)) % n;
                if (ei < 0) ei += n;
                e[i] = ei;
            }
            const double a = 2.0 * M_PI * e[i] / n;
            w += cplx(std::cos(a), std::sin(a)) * z[i];
        }
        return std::make_pair(e, w);
    };
    SupResult res;
    res.rigorous_error = 0.0;
    double best = -1.0;
    std::vector<int> best_e(d, 0);
    cplx best_w = 0.0;
    if (bps.empty()) {
        auto [e, w] = pattern_at(0.0);
        best = std::abs(w);
        best_e = e;
        best_w = w;
    } else {
        for (std::size_t k = 0; k < bps.size(); ++k) {
            const double a = bps[k];
            const double b = k + 1 < bps.size() ? bps[k + 1] : bps[0] + 2.0 * M_PI;
            auto [e, w] = pattern_at((a + b) / 2);
            if (std::abs(w) > best) {
                best = std::abs(w);
                best_e = std::move(e);
                best_w = w;
            }
        }
    }
    res.value = best;
    res.phase = phase_of(best_w);
    res.witness = groups::RootVector{n, std::move(best_e)};
    return res;
}

}  // namespace

SupResult sup_abs_trace(const CMatrix& u, const GroupSpec& spec, int angles) {
    const int d = groups::dimension(spec);
    if (u.dim() != d) throw DomainError("sup_abs_trace: dimension mismatch");

    if (std::get_if<groups::HyperOct>(&spec)) {
        // |z| = max_theta Re(e^{i theta} z) turns the modulus into a sweep;
        // sign freedom folds the sweep into [0, pi).
        const SweepResult sw = phase_sweep(u, angles, /*abs_cost=*/true, M_PI);
        groups::SignedPerm wit;
        wit.perm = sw.assignment;
        wit.signs.resize(d);
        const double c = std::cos(sw.theta), s = std::sin(sw.theta);
        cplx w = 0.0;
        for (int i = 0; i < d; ++i) {
            const cplx z = u(wit.perm.map[i], i);
            const double re = c * z.real() - s * z.imag();
            wit.signs[i] = re >= 0 ? std::int8_t(1) : std::int8_t(-1);
            w += static_cast<double>(wit.signs[i]) * z;
        }
        return SupResult{std::abs(w), wit, phase_of(w), sw.rigorous_error};
    }
    if (std::get_if<groups::SymmetricAsUnitary>(&spec)) {
        const SweepResult sw = phase_sweep(u, angles, /*abs_cost=*/false, 2.0 * M_PI);
        cplx w = 0.0;
        for (int i = 0; i < d; ++i) w += u(sw.assignment.map[i], i);
        return SupResult{std::abs(w), sw.assignment, phase_of(w), sw.rigorous_error};
    }
    if (std::get_if<groups::DiagSign>(&spec)) return sup_diag_sign(u);
    if (const auto* r = std::get_if<groups::DiagRoots>(&spec)) return sup_diag_roots(u, r->n);

    const auto& en = std::get<groups::Enumerated>(spec);
    double best = -1.0;
    std::size_t best_idx = 0;
    cplx best_w = 0.0;
    for (std::size_t k = 0; k < en.data->size(); ++k) {
        const cplx w = trace_with(u, spec, groups::EnumIndex{k});
        if (std::abs(w) > best) {
            best = std::abs(w);
            best_idx = k;
            best_w = w;
        }
    }
    return SupResult{best, groups::EnumIndex{best_idx}, phase_of(best_w), 0.0};
}

SupResult sup_abs_trace_exhaustive(const CMatrix& u, const GroupSpec& spec, std::size_t cap) {
    if (u.dim() != groups::dimension(spec))
        throw DomainError("sup_abs_trace_exhaustive: dimension mismatch");
    const std::vector<Element> elems = groups::enumerate_elements(spec, cap);
    double best = -1.0;
    cplx best_w = 0.0;
    const Element* best_g = nullptr;
    for (const Element& g : elems) {
        const cplx w = trace_with(u, spec, g);
        if (std::abs(w) > best) {
            best = std::abs(w);
            best_w = w;
            best_g = &g;
        }
    }
    return SupResult{best, *best_g, phase_of(best_w), 0.0};
}

McEstimate estimate_EZ(const GroupSpec& spec, Randomization rand, long n_samples, int angles,
                       const SeededRng& base, int threads) {
    if (n_samples < 2) throw DomainError("estimate_EZ: need n_samples >= 2");
    const int d = groups::dimension(spec);
    std::vector<double> vals(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
        SeededRng rng = base.substream(i);
        const CMatrix m = rand == Randomization::Gaussian
                              ? randmat::gaussian_matrix(d, rng)
                              : randmat::haar_unitary(d, rng).mat();
        vals[i] = sup_abs_trace(m, spec, angles).value;
    });
    return summarize(vals, base.seed);
}

McEstimate c3_constant(const GroupSpec& spec, long n_samples, int angles, const SeededRng& base,
                       int threads) {
    if (!groups::is_irreducible(spec))
        throw DomainError("c3_constant: representation must be irreducible");
    const int d = groups::dimension(spec);
    const McEstimate ez = estimate_EZ(spec, Randomization::Haar, n_samples, angles, base, threads);
    McEstimate out;
    out.mean = d / ez.mean;
    out.sem = d * ez.sem / (ez.mean * ez.mean);  // first-order delta method
    out.n = ez.n;
    out.seed = ez.seed;
    return out;
}

DensityDefect density_defect(const CMatrix& u, const GroupSpec& spec, int angles) {
    const int d = groups::dimension(spec);
    (void)matcore::UnitaryMatrix(u);  // defect is defined for unitary u
    const SupResult s = sup_abs_trace(u.adjoint(), spec, angles);
    const double a2 = 2.0 * (1.0 - s.value / d);
    return DensityDefect{std::sqrt(std::max(0.0, a2)), s.witness, s.phase};
}

int default_angles(int d) {
    const int base = static_cast<int>(std::ceil(8.0 * std::sqrt(static_cast<double>(d)))) * 16;
    return std::max(64, base);
}

}  // namespace uglab::supopt
