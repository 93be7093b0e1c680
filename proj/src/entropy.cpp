#include "uglab/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"
#include "uglab/matcore.hpp"

namespace uglab::entropy {

using groups::Element;
using groups::GroupSpec;
using matcore::CMatrix;

double group_metric(const GroupSpec& spec, const Element& s, const Element& t, MetricKind kind) {
    const int d = groups::dimension(spec);
    if (kind == MetricKind::DeltaInf) {
        const CMatrix a = groups::element_matrix(spec, s).mat();
        const CMatrix b = groups::element_matrix(spec, t).mat();
        return matcore::delta_inf(a, b);
    }
    const Element g = groups::compose(spec, groups::inverse(spec, s), t);
    const double re = groups::character(spec, g).real();
    const double d2 = std::sqrt(std::max(0.0, 2.0 * (1.0 - re / d)));
    if (kind == MetricKind::Delta2) return d2;
    return std::pow(static_cast<double>(d), 0.25) * d2;  // scaled Frobenius
}

std::optional<BigRat> ball_measure(const GroupSpec& spec, const BigRat& eps) {
    if (eps <= 0) throw DomainError("ball_measure: eps must be > 0");
    const int d = groups::dimension(spec);
    // {delta2(g, 1) < eps} = {Re chi(g) > d(1 - eps^2/2)}
    const BigRat threshold = BigRat(d) * (1 - eps * eps / 2);
    if (std::get_if<groups::HyperOct>(&spec))
        return exactcomb::ball_measure_hyperoct(d, eps);
    if (std::get_if<groups::SymmetricAsUnitary>(&spec)) {
        const BigInt kf = floor_rat(threshold);
        if (kf >= d) return BigRat(0);
        BigInt count = 0;
        for (long j = std::max(0L, static_cast<long>(kf.get_si()) + 1); j <= d; ++j)
            count += exactcomb::fixed_point_count(d, j);
        BigRat m(count, factorial(static_cast<unsigned long>(d)));
        m.canonicalize();
        return m;
    }
    if (std::get_if<groups::DiagSign>(&spec)) {
        // chi = d - 2r with r sign flips; chi > threshold iff r < d eps^2 / 4
        const BigRat t = BigRat(d) * eps * eps / 4;
        const BigInt rmax = ceil_rat(t) - 1;
        BigInt count = 0;
        for (long r = 0; r <= std::min<long>(d, rmax.get_si()); ++r)
            count += binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(r));
        BigRat m(count, pow2(static_cast<unsigned long>(d)));
        m.canonicalize();
        return m;
    }
    if (const auto* en = std::get_if<groups::Enumerated>(&spec)) {
        BigInt count = 0;
        for (const CMatrix& g : en->data->elements()) {
            const BigRat re = rat_from_double(matcore::trace(g).real());
            if (re > threshold) count += 1;
        }
        BigRat m(count, BigInt(static_cast<unsigned long>(en->data->size())));
        m.canonicalize();
        return m;
    }
    return std::nullopt;  // DiagRoots: no closed form kept here
}

namespace {

// Abelian-subgroup index used by the coset covering bound, when known.
std::optional<BigInt> known_abelian_index(const GroupSpec& spec) {
    if (const auto* h = std::get_if<groups::HyperOct>(&spec))
        return factorial(static_cast<unsigned long>(h->d));  // diagonal {+-1}^d
    if (const auto* s = std::get_if<groups::SymmetricAsUnitary>(&spec))
        return factorial(static_cast<unsigned long>(s->d > 0 ? s->d - 1 : 0));  // <d-cycle>
    if (std::get_if<groups::DiagSign>(&spec)) return BigInt(1);
    if (std::get_if<groups::DiagRoots>(&spec)) return BigInt(1);
    return std::nullopt;
}

struct EnumContext {
    std::vector<Element> elems;
    std::vector<CMatrix> mats;  // filled when the metric needs matrices
    const GroupSpec* spec;
    MetricKind kind;

    double dist(std::size_t i, std::size_t j) const {
        if (!mats.empty()) {
            if (kind == MetricKind::DeltaInf) return matcore::delta_inf(mats[i], mats[j]);
            const double d2 = matcore::delta2(mats[i], mats[j]);
            if (kind == MetricKind::Delta2) return d2;
            return std::pow(static_cast<double>(mats[i].dim()), 0.25) * d2;
        }
        return group_metric(*spec, elems[i], elems[j], kind);
    }
};

EnumContext make_context(const GroupSpec& spec, MetricKind kind, std::size_t budget) {
    EnumContext ctx;
    ctx.spec = &spec;
    ctx.kind = kind;
    ctx.elems = groups::enumerate_elements(spec, budget);
    const bool need_mats =
        kind == MetricKind::DeltaInf || std::holds_alternative<groups::Enumerated>(spec);
    if (need_mats) {
        if (const auto* en = std::get_if<groups::Enumerated>(&spec)) {
            ctx.mats = en->data->elements();
        } else {
            for (const Element& g : ctx.elems)
                ctx.mats.push_back(groups::element_matrix(spec, g).mat());
        }
    }
    return ctx;
}

// Greedy sweep packing. strict: keep points pairwise > beta; otherwise >= beta.
std::vector<std::size_t> greedy_packing(const EnumContext& ctx, double beta, bool strict,
                                        const std::vector<std::size_t>& order) {
    std::vector<std::size_t> chosen;
    for (std::size_t idx : order) {
        bool ok = true;
        for (std::size_t c : chosen) {
            const double dd = ctx.dist(idx, c);
            if (strict ? (dd <= beta) : (dd < beta)) {
                ok = false;
                break;
            }
        }
        if (ok) chosen.push_back(idx);
    }
    return chosen;
}

// Farthest-point-first cover with centers in the group; open balls of radius
// eps, deterministic tie-break on the lowest index.
std::size_t greedy_cover_size(const EnumContext& ctx, double eps) {
    const std::size_t n = ctx.elems.size();
    std::vector<double> mind(n);
    for (std::size_t i = 0; i < n; ++i) mind[i] = ctx.dist(i, 0);
    std::size_t covered_checks = 1;
    while (true) {
        std::size_t far = 0;
        double fd = -1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mind[i] > fd) {
                fd = mind[i];
                far = i;
            }
        if (fd < eps) return covered_checks;
        ++covered_checks;
        for (std::size_t i = 0; i < n; ++i) mind[i] = std::min(mind[i], ctx.dist(i, far));
    }
}

BigInt el1_coset_bound(const BigInt& k, int d, double eps, const BigInt& order) {
    // N'(eps) <= N(eps/2) <= k (2 pi / (eps/2))^d = k (4 pi / eps)^d.
    const double logv = log_bigint(k) + d * std::log(4.0 * M_PI / eps);
    if (logv >= log_bigint(order)) return order;
    long double v = std::exp(static_cast<long double>(logv));
    v *= 1.0000001L;  // keep it an upper bound under rounding
    BigInt out;
    mpz_set_d(out.get_mpz_t(), static_cast<double>(v));
    return out + 1;
}

}  // namespace

CoveringCurve covering_curve(const GroupSpec& spec, const std::vector<double>& eps_grid,
                             MetricKind kind, std::size_t budget) {
    if (eps_grid.empty()) throw DomainError("covering_curve: empty eps grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0) || eps_grid[i] > 2.0)
            throw DomainError("covering_curve: eps grid must lie in (0, 2]");
        if (i > 0 && eps_grid[i] <= eps_grid[i - 1])
            throw DomainError("covering_curve: eps grid must be increasing");
    }
    const BigInt order = groups::group_order(spec);
    const bool enumerable = order <= BigInt(static_cast<unsigned long>(budget));
    std::optional<EnumContext> ctx;
    if (enumerable) ctx = make_context(spec, kind, budget);
    const std::optional<BigInt> coset_k = known_abelian_index(spec);
    const int d = groups::dimension(spec);

    CoveringCurve curve;
    curve.group_order = order;
    curve.eps = eps_grid;

    std::vector<std::size_t> canonical;
    if (ctx) {
        canonical.resize(ctx->elems.size());
        for (std::size_t i = 0; i < canonical.size(); ++i) canonical[i] = i;
    }

    for (double eps : eps_grid) {
        BigInt lower = 1;
        std::string lower_tag = "trivial";
        BigInt upper = order;
        std::string upper_tag = "group-order";

        if (kind == MetricKind::Delta2) {
            if (const auto m = ball_measure(spec, rat_from_double(eps)); m && *m > 0) {
                const BigInt b = ceil_rat(1 / *m);
                if (b > lower) {
                    lower = b;
                    lower_tag = "exact-measure";
                }
            }
            if (const auto m2 = ball_measure(spec, rat_from_double(eps) / 2); m2 && *m2 > 0) {
                const BigInt b = floor_rat(1 / *m2);
                if (b < upper) {
                    upper = b;
                    upper_tag = "exact-measure";
                }
            }
            if (coset_k) {
                const BigInt b = el1_coset_bound(*coset_k, d, eps, order);
                if (b < upper) {
                    upper = b;
                    upper_tag = "el1";
                }
            }
        }
        if (ctx) {
            const auto packing = greedy_packing(*ctx, 2.0 * eps, /*strict=*/false, canonical);
            const BigInt b = BigInt(static_cast<unsigned long>(packing.size()));
            if (b > lower) {
                lower = b;
                lower_tag = "packing";
            }
            const BigInt c = BigInt(static_cast<unsigned long>(greedy_cover_size(*ctx, eps)));
            if (c < upper) {
                upper = c;
                upper_tag = "greedy-cover";
            }
        }
        curve.n_lower.push_back(lower);
        curve.n_upper.push_back(upper);
        curve.method.push_back(lower_tag + "/" + upper_tag);
    }

    // Isotonic cleanup: a lower bound at larger eps holds at smaller eps and
    // vice versa, so enforce monotonicity without weakening anything.
    for (std::size_t i = curve.eps.size(); i-- > 1;)
        if (curve.n_lower[i - 1] < curve.n_lower[i]) curve.n_lower[i - 1] = curve.n_lower[i];
    for (std::size_t i = 1; i < curve.eps.size(); ++i)
        if (curve.n_upper[i] > curve.n_upper[i - 1]) curve.n_upper[i] = curve.n_upper[i - 1];
    for (std::size_t i = 0; i < curve.eps.size(); ++i)
        if (curve.n_lower[i] > curve.n_upper[i])
            throw NumericError("covering_curve: bracket inversion (bug)");
    return curve;
}

EntropyReport dudley_sudakov(const CoveringCurve& curve) {
    if (curve.eps.empty()) throw DomainError("dudley_sudakov: empty curve");
    const double logG = log_bigint(curve.group_order);
    auto slog = [](const BigInt& n) { return std::sqrt(std::max(0.0, log_bigint(n))); };

    // Upper: N <= |G| on (0, eps_1), step through n_upper to the right.
    double up = curve.eps.front() * std::sqrt(std::max(0.0, logG));
    for (std::size_t i = 1; i < curve.eps.size(); ++i)
        up += (curve.eps[i] - curve.eps[i - 1]) * slog(curve.n_upper[i - 1]);
    if (curve.eps.back() < 2.0) up += (2.0 - curve.eps.back()) * slog(curve.n_upper.back());

    // Lower: N(eps) >= n_lower(eps_i) for eps <= eps_i.
    double lo = curve.eps.front() * slog(curve.n_lower.front());
    for (std::size_t i = 1; i < curve.eps.size(); ++i)
        lo += (curve.eps[i] - curve.eps[i - 1]) * slog(curve.n_lower[i]);

    double sud = 0.0;
    for (std::size_t i = 0; i < curve.eps.size(); ++i)
        sud = std::max(sud, curve.eps[i] * slog(curve.n_lower[i]));

    return EntropyReport{lo, up, sud};
}

std::vector<Element> separated_set(const GroupSpec& spec, double beta, MetricKind kind,
                                   std::size_t cap, SeededRng& rng) {
    if (!(beta > 0)) throw DomainError("separated_set: beta must be > 0");
    const BigInt order = groups::group_order(spec);
    const bool enumerable = order <= BigInt(static_cast<unsigned long>(cap));
    if (enumerable) {
        EnumContext ctx = make_context(spec, kind, cap);
        std::vector<std::size_t> sweep(ctx.elems.size());
        for (std::size_t i = 0; i < sweep.size(); ++i) sweep[i] = i;
        for (std::size_t i = sweep.size(); i-- > 1;)
            std::swap(sweep[i], sweep[rng.uniform_index(i + 1)]);
        std::vector<Element> out;
        for (std::size_t idx : greedy_packing(ctx, beta, /*strict=*/true, sweep))
            out.push_back(ctx.elems[idx]);
        return out;
    }
    // Best effort: greedy over cap random draws.
    std::vector<Element> chosen;
    for (std::size_t k = 0; k < cap; ++k) {
        const Element g = groups::sample_uniform(spec, rng);
        bool ok = true;
        for (const Element& c : chosen)
            if (group_metric(spec, g, c, kind) <= beta) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(g);
    }
    return chosen;
}

std::vector<double> default_eps_grid() {
    std::vector<double> grid;
    const int points = 64;
    const double lo = std::pow(2.0, -6.0), hi = 2.0;
    for (int i = 0; i < points; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    grid.back() = 2.0;
    return grid;
}

std::string covering_curve_csv(const CoveringCurve& curve) {
    std::ostringstream os;
    os << "eps,n_lower,n_upper,method\n";
    for (std::size_t i = 0; i < curve.eps.size(); ++i) {
        char buf[32];
        const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, curve.eps[i]);
        (void)ec;
        os << std::string(buf, p) << ',' << curve.n_lower[i].get_str() << ','
           << curve.n_upper[i].get_str() << ',' << curve.method[i] << '\n';
    }
    return os.str();
}

}  // namespace uglab::entropy
