// Acceptance suite: one check per criterion, each printed as a PASS/FAIL line.
// Exit code = number of failed criteria.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "uglab/boundsver.hpp"
#include "uglab/entropy.hpp"
#include "uglab/exactcomb.hpp"
#include "uglab/groups.hpp"
#include "uglab/orlicz.hpp"
#include "uglab/randmat.hpp"
#include "uglab/supopt.hpp"

using namespace uglab;
using groups::GroupSpec;
using matcore::CMatrix;

namespace {

int g_threads = 1;
constexpr std::uint64_t kSeed = 1;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

bool report(int num, const std::string& what, bool ok, double secs) {
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", num, what.c_str(), secs);
    std::fflush(stdout);
    return ok;
}

// ---------------------------------------------------------------------- 1
bool criterion1() {
    Timer t;
    bool ok = true;
    // D(n): closed-form series vs recurrence vs brute force, n <= 8
    for (long n = 0; n <= 8; ++n) {
        BigRat series = 0;
        for (long k = 0; k <= n; ++k) {
            BigRat term(BigInt((k % 2) ? -1 : 1), factorial(static_cast<unsigned long>(k)));
            term.canonicalize();
            series += term;
        }
        series *= BigRat(factorial(static_cast<unsigned long>(n)));
        series.canonicalize();
        long brute = 0;
        if (n == 0) {
            brute = 1;
        } else {
            for (const auto& p : oracles::all_permutations(static_cast<int>(n)))
                if (oracles::count_fixed_points(p) == 0) ++brute;
        }
        ok &= exactcomb::derangements(n) == BigInt(series.get_num());
        ok &= exactcomb::derangements(n) == brute;
    }
    // sum_j X_j = d! and pe12 for d <= 12
    for (long d = 1; d <= 12; ++d) {
        BigInt total = 0;
        for (long j = 0; j <= d; ++j) {
            const BigInt xj = exactcomb::fixed_point_count(d, j);
            total += xj;
            ok &= xj * factorial(static_cast<unsigned long>(j)) <=
                  factorial(static_cast<unsigned long>(d));
        }
        ok &= total == factorial(static_cast<unsigned long>(d));
    }
    // pe31 sandwich, exact, all d <= 12 and 0 <= k < d
    for (long d = 1; d <= 12; ++d) {
        const BigRat lower(BigInt(1), factorial(static_cast<unsigned long>(d)) *
                                          pow2(static_cast<unsigned long>(d)));
        for (long k = 0; k < d; ++k) {
            const BigRat tail = exactcomb::char_tail_hyperoct(d, k);
            ok &= tail >= lower;
            ok &= tail.get_d() <=
                  std::exp(1.0) * std::pow(std::exp(1.0) / (k + 1), k + 1) * (1 + 1e-12);
        }
    }
    // char_dist_hyperoct(2) equals the 8-element enumeration
    const auto dist = exactcomb::char_dist_hyperoct(2);
    std::map<long, long> counts;
    for (const auto& g : groups::enumerate_elements(GroupSpec(groups::HyperOct{2}), 8))
        ++counts[std::lround(groups::character(GroupSpec(groups::HyperOct{2}), g).real())];
    ok &= dist.support.size() == counts.size();
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        BigRat expect(counts[dist.support[i]], 8);
        expect.canonicalize();
        ok &= dist.probs[i] == expect;
    }
    const double secs = t.secs();
    return report(1, "exact combinatorics (D(n), X_j, pe31, d=2 enumeration), zero tolerance",
                  ok && secs < 10.0, secs);
}

// ---------------------------------------------------------------------- 2
bool criterion2() {
    Timer t;
    bool ok = true;
    // sup oracle vs exhaustive enumeration on 100 Haar unitaries per d
    for (int d = 2; d <= 5; ++d) {
        const GroupSpec spec = groups::HyperOct{d};
        const int angles = supopt::default_angles(d);
        SeededRng base(kSeed, 1000 + d);
        std::vector<char> good(100, 0);
        parallel_for(100, g_threads, [&](std::size_t i) {
            SeededRng rng = base.substream(i);
            const CMatrix u = randmat::haar_unitary(d, rng).mat();
            const auto got = supopt::sup_abs_trace(u, spec, angles);
            const double brute = oracles::brute_sup_hyperoct(u);
            good[i] = (brute <= got.value + got.rigorous_error + 1e-9) &&
                      (got.value <= brute + 1e-9);
        });
        for (char g : good) ok &= g != 0;
    }
    // lap_max equals brute force exactly: 200 random costs per d <= 7
    SeededRng lr(kSeed, 77);
    for (int d = 2; d <= 7; ++d) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> cost(static_cast<std::size_t>(d) * d);
            for (auto& v : cost) v = lr.gaussian();
            if (supopt::lap_max(cost, d).value != oracles::brute_lap_max(cost, d)) ok = false;
        }
    }
    const double secs = t.secs();
    return report(2, "supremum oracle vs exhaustive enumeration; LAP vs brute force",
                  ok && secs < 120.0, secs);
}

// ---------------------------------------------------------------------- 3+4
std::map<int, McEstimate> g_hyp_ez;  // shared between criteria 3 and 4

bool criterion3() {
    Timer t;
    const std::vector<int> dims = {8, 16, 32, 64};
    const long samples = 400;
    const int angles = 512;
    bool ok = true;
    std::ostringstream detail;

    auto spread = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };

    std::vector<double> rh, rs, rc;
    for (int d : dims) {
        const auto eh = supopt::estimate_EZ(GroupSpec(groups::HyperOct{d}),
                                            supopt::Randomization::Gaussian, samples, angles,
                                            SeededRng(kSeed, 300 + d), g_threads);
        g_hyp_ez[d] = eh;
        rh.push_back(eh.mean / std::sqrt(d * std::log(static_cast<double>(d))));
        const auto es = supopt::estimate_EZ(GroupSpec(groups::SymmetricAsUnitary{d}),
                                            supopt::Randomization::Gaussian, samples, angles,
                                            SeededRng(kSeed, 400 + d), g_threads);
        rs.push_back(es.mean / std::sqrt(d * std::log(static_cast<double>(d))));
        rc.push_back(orlicz::c2_constant(GroupSpec(groups::HyperOct{d})).norm /
                     std::sqrt(d / std::log(static_cast<double>(d))));
    }
    detail << "spreads: hyperoct " << spread(rh) << ", sym " << spread(rs) << ", C2 "
           << spread(rc);
    ok &= spread(rh) <= 2.0;
    ok &= spread(rs) <= 2.0;
    ok &= spread(rc) <= 2.0;
    const double secs = t.secs();
    return report(3, "growth-rate ratio stability (" + detail.str() + ")",
                  ok && secs < 600.0, secs);
}

bool criterion4() {
    Timer t;
    bool ok = true;
    for (int d : {8, 16, 32}) {
        const McEstimate e = g_hyp_ez.at(d);
        const double tb2 =
            std::sqrt(2.0 * log_bigint(factorial(static_cast<unsigned long>(d)))) + std::sqrt(d);
        ok &= e.mean + 4.0 * e.sem <= tb2;
    }
    for (int d : {8, 16, 32}) {
        const auto e = supopt::estimate_EZ(GroupSpec(groups::DiagSign{d}),
                                           supopt::Randomization::Gaussian, 400, 64,
                                           SeededRng(kSeed, 500 + d), g_threads);
        const double sq = std::sqrt(static_cast<double>(d));
        ok &= e.mean - 4.0 * e.sem >= 0.5 * sq;
        ok &= e.mean + 4.0 * e.sem <= 1.5 * sq;
    }
    const double secs = t.secs();
    return report(4, "tb2 dominance for hyperoct; diag-sign inside [0.5, 1.5] sqrt(d)", ok, secs);
}

// ---------------------------------------------------------------------- 5
bool criterion5() {
    Timer t;
    bool ok = true;
    // pe29 chain exact on enumerated groups (up to 3840 elements here)
    for (const GroupSpec& base :
         {GroupSpec(groups::HyperOct{4}), GroupSpec(groups::HyperOct{5}),
          GroupSpec(groups::parse_group_spec("q8"))}) {
        const auto mat = groups::materialize_group(base, 10000);
        const auto& data = *mat.spec.data;
        const long n = static_cast<long>(data.size());
        for (double eps : {0.4, 0.8, 1.2, 1.7}) {
            std::vector<std::size_t> chosen;  // maximal >= eps packing
            for (std::size_t i = 0; i < data.size(); ++i) {
                bool far = true;
                for (std::size_t c : chosen)
                    if (matcore::delta2(data.element(i), data.element(c)) < eps) {
                        far = false;
                        break;
                    }
                if (far) chosen.push_back(i);
            }
            auto count_ball = [&](double radius) {
                long cnt = 0;
                for (std::size_t i = 0; i < data.size(); ++i)
                    if (matcore::delta2(data.element(i), data.element(data.identity_index())) <
                        radius)
                        ++cnt;
                return cnt;
            };
            const long p = static_cast<long>(chosen.size());
            ok &= p * count_ball(eps) >= n;      // 1/m(eps) <= N'(eps) <= |P|
            ok &= p * count_ball(eps / 2) <= n;  // |P| <= 1/m(eps/2)
        }
    }
    // el1 in log form for hyperoct d <= 16
    for (int d : {4, 8, 12, 16}) {
        for (double eps : {0.25, 0.5, 1.0}) {
            const auto m =
                entropy::ball_measure(GroupSpec(groups::HyperOct{d}), rat_from_double(eps));
            ok &= m.has_value() &&
                  -log_rat(*m) <= log_bigint(factorial(static_cast<unsigned long>(d))) +
                                      d * std::log(4.0 * M_PI / eps);
        }
    }
    // pe32 with c3 calibrated at d = 8
    const double eps = 0.5;
    auto logN = [&](int d) {
        return -log_rat(
            *entropy::ball_measure(GroupSpec(groups::HyperOct{d}), rat_from_double(eps)));
    };
    const double c3 = (1.0 - eps * eps / 2.0) * 8.0 * std::log(8.0 / std::exp(1.0)) - logN(8);
    for (int d : {12, 16, 24})
        ok &= logN(d) >= (1.0 - eps * eps / 2.0) * d * std::log(d / std::exp(1.0)) - c3;
    // sudakov <= dudley-upper on every computed curve
    for (const GroupSpec& spec :
         {GroupSpec(groups::HyperOct{4}), GroupSpec(groups::HyperOct{8}),
          GroupSpec(groups::HyperOct{16}), GroupSpec(groups::HyperOct{24}),
          GroupSpec(groups::SymmetricAsUnitary{12}), GroupSpec(groups::DiagSign{16})}) {
        const auto curve =
            entropy::covering_curve(spec, entropy::default_eps_grid(),
                                    entropy::MetricKind::Delta2, 4000);
        const auto rep = entropy::dudley_sudakov(curve);
        ok &= rep.sudakov <= rep.dudley_upper;
        ok &= rep.dudley_lower <= rep.dudley_upper;
    }
    return report(5, "entropy chain (pe29 exact, el1 log form, pe32, Sudakov<=Dudley)", ok,
                  t.secs());
}

// ---------------------------------------------------------------------- 6
bool criterion6() {
    Timer t;
    bool ok = true;
    // closed forms to 1e-9
    ok &= std::abs(orlicz::psi2_weighted(std::vector<double>{3.0}, std::vector<double>{1.0}).norm -
                   3.0) <= 1e-9 * 3.0;
    const exactcomb::ExactDist rad({-1, 1}, {BigRat(1, 2), BigRat(1, 2)});
    ok &= std::abs(orlicz::psi2_exact(rad).norm - 1.0) <= 1e-8;
    const exactcomb::ExactDist two({0, 2}, {BigRat(1, 2), BigRat(1, 2)});
    ok &= std::abs(orlicz::psi2_exact(two).norm -
                   2.0 / std::sqrt(std::log(2.0 * std::exp(1.0) - 1.0))) <= 1e-8;
    // empirical within 10% of exact at 1e5 samples, d in {4, 8}
    for (int d : {4, 8}) {
        const GroupSpec spec = groups::HyperOct{d};
        SeededRng r(kSeed, 200 + d);
        std::vector<double> chars(100000);
        for (auto& c : chars)
            c = groups::character(spec, groups::sample_uniform(spec, r)).real();
        const double emp = orlicz::psi2_empirical(chars).norm;
        const double exact = orlicz::psi2_exact(exactcomb::char_dist_hyperoct(d)).norm;
        ok &= std::abs(emp - exact) <= 0.10 * exact;
    }
    // se3 moment ratio inside [1/4, 4] on all exact character distributions tested
    for (long d : {2L, 4L, 8L, 12L, 16L}) {
        const auto dist = exactcomb::char_dist_hyperoct(d);
        const double ratio = orlicz::moment_ratio(dist, 64) / orlicz::psi2_exact(dist).norm;
        ok &= ratio >= 0.25 && ratio <= 4.0;
    }
    return report(6, "psi2 solver closed forms, empirical consistency, moment-ratio band", ok,
                  t.secs());
}

// ---------------------------------------------------------------------- 7
bool criterion7() {
    Timer t;
    bool ok = true;
    std::ostringstream detail;
    for (const std::string& name : {"hyperoct:8", "sym:8", "q8", "diag-roots:1:8"}) {
        const GroupSpec spec = groups::parse_group_spec(name);
        const int d = groups::dimension(spec);
        const double c2 = orlicz::c2_constant(spec).norm;
        const auto ez = supopt::estimate_EZ(spec, supopt::Randomization::Haar, 400,
                                            supopt::default_angles(d),
                                            SeededRng(kSeed, 700 + d), g_threads);
        const double m_lo = std::max(ez.mean - 4.0 * ez.sem, 1e-12);
        const double m_hi = ez.mean + 4.0 * ez.sem;
        const double worst = std::max(c2 * m_hi / d, d / (m_lo * c2));
        detail << name << "=" << worst << " ";
        ok &= worst <= 8.0;
        ok &= d / m_lo <= d * (1 + 1e-12);  // C3 <= d at 4 sem
    }
    return report(7, "fl1 equivalence band (" + detail.str() + ") and C3 <= d", ok, t.secs());
}

// ---------------------------------------------------------------------- 8
#ifdef UGLAB_CLI_PATH
std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(UGLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<spawn failure>";
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    pclose(p);
    return out;
}

bool criterion8() {
    Timer t;
    bool ok = true;
    const std::string ez = "ez --group diag-sign:64 --samples 400 --seed 7 --angles 64";
    const std::string a = run_cli(ez);
    const std::string b = run_cli(ez);
    ok &= !a.empty() && a == b;
    // thread count must not change the estimate
    const std::string t1 = run_cli(ez + " --threads 1");
    const std::string t4 = run_cli(ez + " --threads 4");
    auto estimate_part = [](const std::string& s) {
        const auto pos = s.find("\"estimate\"");
        return pos == std::string::npos ? s : s.substr(pos);
    };
    ok &= estimate_part(t1) == estimate_part(t4) && !estimate_part(t1).empty();
    // verify suite: byte-identical reports
    const std::string v = "verify --suite hyperoct-core --format csv";
    ok &= run_cli(v) == run_cli(v);
    return report(8, "CLI byte-identical reproducibility at any --threads", ok, t.secs());
}
#else
bool criterion8() {
    return report(8, "CLI reproducibility (binary path missing at compile time)", false, 0.0);
}
#endif

}  // namespace

int main() {
    g_threads = static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
    std::printf("acceptance suite: seed=%llu, threads=%d\n",
                static_cast<unsigned long long>(kSeed), g_threads);
    int failures = 0;
    failures += !criterion1();
    failures += !criterion2();
    failures += !criterion3();
    failures += !criterion4();
    failures += !criterion5();
    failures += !criterion6();
    failures += !criterion7();
    failures += !criterion8();
    std::printf("%d/8 criteria passed\n", 8 - failures);
    return failures;
}
