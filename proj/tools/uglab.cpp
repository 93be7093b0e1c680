// uglab: command-line front end. Subcommands: char-dist, ez, entropy, psi2,
// sup, verify, jordan. Every output embeds its own config and is byte-stable
// under re-runs with the same seed at any --threads value.
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uglab/boundsver.hpp"
#include "uglab/entropy.hpp"
#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"
#include "uglab/groups.hpp"
#include "uglab/orlicz.hpp"
#include "uglab/supopt.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::ordered_json;

struct CommonOpts {
    std::string group;
    std::string out;
    std::string format = "json";
    long samples = 400;
    int angles = 0;  // 0 -> default_angles(d)
    std::uint64_t seed = 1;
    int threads = 1;
};

ordered_json config_echo(const std::string& cmd, const CommonOpts& o) {
    ordered_json j;
    j["command"] = cmd;
    if (!o.group.empty()) j["group"] = o.group;
    j["samples"] = o.samples;
    j["angles"] = o.angles;
    j["seed"] = o.seed;
    j["threads"] = o.threads;
    j["format"] = o.format;
    return j;
}

void emit(const CommonOpts& o, const ordered_json& doc, const std::string& csv_body) {
    std::string text;
    if (o.format == "json") {
        text = doc.dump(2) + "\n";
    } else if (o.format == "csv") {
        std::ostringstream os;
        os << "# version=" << kVersion << "\n# config=" << doc["config"].dump()
           << "\n# seed=" << doc["config"]["seed"] << "\n";
        os << csv_body;
        text = os.str();
    } else {
        throw uglab::DomainError("unknown format '" + o.format + "'");
    }
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw uglab::DomainError("cannot write output file " + o.out);
        f << text;
    }
}

std::string fmt_double(double v) {
    char buf[40];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

ordered_json element_json(const uglab::groups::GroupSpec& spec,
                          const uglab::groups::Element& g) {
    using namespace uglab::groups;
    ordered_json j;
    (void)spec;
    if (const auto* e = std::get_if<SignedPerm>(&g)) {
        j["type"] = "signed-perm";
        j["sigma"] = e->perm.map;
        std::vector<int> s(e->signs.begin(), e->signs.end());
        j["signs"] = s;
    } else if (const auto* p = std::get_if<Permutation>(&g)) {
        j["type"] = "perm";
        j["sigma"] = p->map;
    } else if (const auto* sv = std::get_if<SignVector>(&g)) {
        j["type"] = "diag-sign";
        std::vector<int> s(sv->signs.begin(), sv->signs.end());
        j["signs"] = s;
    } else if (const auto* rv = std::get_if<RootVector>(&g)) {
        j["type"] = "diag-roots";
        j["n"] = rv->order;
        j["exps"] = rv->exps;
    } else {
        j["type"] = "enum-index";
        j["index"] = std::get<EnumIndex>(g).index;
    }
    return j;
}

ordered_json mc_json(const uglab::McEstimate& e) {
    ordered_json j;
    j["mean"] = e.mean;
    j["sem"] = e.sem;
    j["n"] = e.n;
    j["seed"] = e.seed;
    return j;
}

int cmd_char_dist(const CommonOpts& o) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    uglab::exactcomb::ExactDist dist{{0}, {uglab::BigRat(1)}};
    if (const auto* h = std::get_if<uglab::groups::HyperOct>(&spec)) {
        dist = uglab::exactcomb::char_dist_hyperoct(h->d);
    } else if (const auto* en = std::get_if<uglab::groups::Enumerated>(&spec)) {
        // tabulate integer traces
        std::map<long, uglab::BigInt> counts;
        for (const auto& m : en->data->elements()) {
            const double t = uglab::matcore::trace(m).real();
            const double r = std::round(t);
            if (std::abs(t - r) > 1e-9 ||
                std::abs(uglab::matcore::trace(m).imag()) > 1e-9)
                throw uglab::NumericError("char-dist: non-integer trace in enumerated group");
            counts[static_cast<long>(r)] += 1;
        }
        std::vector<long> support;
        std::vector<uglab::BigRat> probs;
        const uglab::BigInt n(static_cast<unsigned long>(en->data->size()));
        for (const auto& [m, c] : counts) {
            support.push_back(m);
            uglab::BigRat p(c, n);
            p.canonicalize();
            probs.push_back(p);
        }
        dist = uglab::exactcomb::ExactDist(std::move(support), std::move(probs));
    } else {
        throw uglab::DomainError("char-dist supports hyperoct:d and enumerated groups");
    }

    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("char-dist", o);
    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "m,prob,prob_float,tail_gt,tail_gt_float\n";
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const long m = dist.support[i];
        const uglab::BigRat tail = dist.tail_gt(m);
        ordered_json r;
        r["m"] = m;
        r["prob"] = uglab::rat_to_string(dist.probs[i]);
        r["prob_float"] = dist.probs[i].get_d();
        r["tail_gt"] = uglab::rat_to_string(tail);
        r["tail_gt_float"] = tail.get_d();
        rows.push_back(r);
        csv << m << ',' << uglab::rat_to_string(dist.probs[i]) << ','
            << fmt_double(dist.probs[i].get_d()) << ',' << uglab::rat_to_string(tail) << ','
            << fmt_double(tail.get_d()) << '\n';
    }
    doc["distribution"] = rows;
    emit(o, doc, csv.str());
    return 0;
}

int cmd_ez(const CommonOpts& o, const std::string& randomization) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    const int d = uglab::groups::dimension(spec);
    const int angles = o.angles > 0 ? o.angles : uglab::supopt::default_angles(d);
    const auto rand = randomization == "haar" ? uglab::supopt::Randomization::Haar
                                              : uglab::supopt::Randomization::Gaussian;
    if (randomization != "haar" && randomization != "gaussian")
        throw uglab::DomainError("--randomization must be gaussian or haar");
    const auto est = uglab::supopt::estimate_EZ(spec, rand, o.samples, angles,
                                                uglab::SeededRng(o.seed), o.threads);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("ez", o);
    doc["config"]["randomization"] = randomization;
    doc["config"]["angles_used"] = angles;
    doc["estimate"] = mc_json(est);
    std::ostringstream csv;
    csv << "group,randomization,mean,sem,n,seed\n"
        << o.group << ',' << randomization << ',' << fmt_double(est.mean) << ','
        << fmt_double(est.sem) << ',' << est.n << ',' << est.seed << '\n';
    emit(o, doc, csv.str());
    return 0;
}

int cmd_entropy(const CommonOpts& o, double eps_min, double eps_max, int eps_points,
                const std::string& metric, std::size_t budget) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    uglab::entropy::MetricKind kind = uglab::entropy::MetricKind::Delta2;
    if (metric == "delta-inf")
        kind = uglab::entropy::MetricKind::DeltaInf;
    else if (metric == "scaled-frobenius")
        kind = uglab::entropy::MetricKind::ScaledFrobenius;
    else if (metric != "delta2")
        throw uglab::DomainError("--metric must be delta2, delta-inf or scaled-frobenius");

    std::vector<double> grid;
    if (eps_points < 1) throw uglab::DomainError("--eps-points must be >= 1");
    if (eps_points == 1) {
        grid.push_back(eps_min);
    } else {
        for (int i = 0; i < eps_points; ++i)
            grid.push_back(eps_min *
                           std::pow(eps_max / eps_min, static_cast<double>(i) / (eps_points - 1)));
    }
    const auto curve = uglab::entropy::covering_curve(spec, grid, kind, budget);
    const auto rep = uglab::entropy::dudley_sudakov(curve);

    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("entropy", o);
    doc["config"]["eps_min"] = eps_min;
    doc["config"]["eps_max"] = eps_max;
    doc["config"]["eps_points"] = eps_points;
    doc["config"]["metric"] = metric;
    doc["config"]["budget"] = budget;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < curve.eps.size(); ++i) {
        ordered_json r;
        r["eps"] = curve.eps[i];
        r["n_lower"] = curve.n_lower[i].get_str();
        r["n_upper"] = curve.n_upper[i].get_str();
        r["method"] = curve.method[i];
        rows.push_back(r);
    }
    doc["curve"] = rows;
    doc["dudley_lower"] = rep.dudley_lower;
    doc["dudley_upper"] = rep.dudley_upper;
    doc["sudakov"] = rep.sudakov;
    std::ostringstream csv;
    csv << "# dudley_lower=" << fmt_double(rep.dudley_lower)
        << "\n# dudley_upper=" << fmt_double(rep.dudley_upper)
        << "\n# sudakov=" << fmt_double(rep.sudakov) << '\n'
        << uglab::entropy::covering_curve_csv(curve);
    emit(o, doc, csv.str());
    return 0;
}

int cmd_psi2(const CommonOpts& o) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    const auto c2 = uglab::orlicz::c2_constant(spec);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("psi2", o);
    doc["c2"]["norm"] = c2.norm;
    doc["c2"]["bracket_lo"] = c2.lo;
    doc["c2"]["bracket_hi"] = c2.hi;
    doc["c2"]["iterations"] = c2.iterations;
    std::ostringstream csv;
    csv << "group,c2,bracket_lo,bracket_hi,iterations\n"
        << o.group << ',' << fmt_double(c2.norm) << ',' << fmt_double(c2.lo) << ','
        << fmt_double(c2.hi) << ',' << c2.iterations << '\n';
    if (const auto* h = std::get_if<uglab::groups::HyperOct>(&spec)) {
        const double mr =
            uglab::orlicz::moment_ratio(uglab::exactcomb::char_dist_hyperoct(h->d), 64);
        doc["moment_ratio"] = mr;
        csv << "moment_ratio," << fmt_double(mr) << ",,,\n";
    }
    emit(o, doc, csv.str());
    return 0;
}

int cmd_sup(const CommonOpts& o, const std::string& matrix_path, bool exhaustive,
            std::size_t cap) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    const auto u = uglab::groups::parse_matrix_json(matrix_path);
    const int d = uglab::groups::dimension(spec);
    if (u.dim() != d) throw uglab::DomainError("sup: matrix dimension does not match group");
    const int angles = o.angles > 0 ? o.angles : uglab::supopt::default_angles(d);

    const auto res = exhaustive ? uglab::supopt::sup_abs_trace_exhaustive(u, spec, cap)
                                : uglab::supopt::sup_abs_trace(u, spec, angles);
    const auto defect = uglab::supopt::density_defect(u, spec, angles);

    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("sup", o);
    doc["config"]["matrix"] = matrix_path;
    doc["config"]["exhaustive"] = exhaustive;
    doc["config"]["angles_used"] = angles;
    doc["sup"]["value"] = res.value;
    doc["sup"]["phase"] = res.phase;
    doc["sup"]["rigorous_error"] = res.rigorous_error;
    doc["sup"]["witness"] = element_json(spec, res.witness);
    doc["density_defect"]["alpha"] = defect.alpha;
    doc["density_defect"]["phase"] = defect.phase;
    doc["density_defect"]["witness"] = element_json(spec, defect.witness);
    std::ostringstream csv;
    csv << "quantity,value\nsup," << fmt_double(res.value) << "\nphase," << fmt_double(res.phase)
        << "\nrigorous_error," << fmt_double(res.rigorous_error) << "\nalpha,"
        << fmt_double(defect.alpha) << '\n';
    emit(o, doc, csv.str());
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& suite) {
    uglab::boundsver::SuiteConfig cfg;
    std::ifstream f(suite);
    if (f) {
        nlohmann::json j;
        f >> j;
        cfg = uglab::boundsver::suite_from_json(j);
    } else {
        cfg = uglab::boundsver::builtin_suite(suite);
    }
    if (o.samples > 0) cfg.samples = o.samples;
    if (o.angles > 0) cfg.angles = o.angles;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const auto rep = uglab::boundsver::run_verification(cfg);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = uglab::boundsver::report_to_json(rep)["config"];
    doc["config"]["seed"] = rep.seed;
    doc["report"] = uglab::boundsver::report_to_json(rep);
    emit(o, doc, uglab::boundsver::report_to_csv(rep));
    return rep.all_pass() ? 0 : 1;
}

int cmd_jordan(const CommonOpts& o, std::size_t exhaustive_cap) {
    const auto spec = uglab::groups::parse_group_spec(o.group);
    const auto* en = std::get_if<uglab::groups::Enumerated>(&spec);
    if (!en) throw uglab::DomainError("jordan requires an enumerated group (enum:FILE or q8)");
    uglab::groups::EnumeratedGroup g{*en, en->data->size(), en->data->closure_defect()};
    const auto res = uglab::groups::abelian_index_upper(g, exhaustive_cap);
    const int d = uglab::groups::dimension(spec);
    const auto jb = uglab::boundsver::jordan_bound(d);

    ordered_json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo("jordan", o);
    doc["order"] = g.order;
    doc["closure_defect"] = g.closure_defect;
    doc["irreducible"] = uglab::groups::is_irreducible(spec);
    doc["abelian_index"] = res.index.get_str();
    doc["index_exact"] = res.exact;
    doc["witness_size"] = res.witness.size();
    doc["witness_normal"] = res.witness_normal;
    doc["jordan_bound"] = jb.value.get_str();
    doc["jordan_bound_asserted"] = jb.asserted;
    std::ostringstream csv;
    csv << "quantity,value\norder," << g.order << "\nclosure_defect,"
        << fmt_double(g.closure_defect) << "\nabelian_index," << res.index.get_str()
        << "\nindex_exact," << (res.exact ? "true" : "false") << "\nwitness_normal,"
        << (res.witness_normal ? "true" : "false") << "\njordan_bound," << jb.value.get_str()
        << '\n';
    emit(o, doc, csv.str());
    return 0;
}

ordered_json error_json(const std::string& type, const std::string& message) {
    ordered_json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantitative laboratory for characters, entropy and suprema over matrix groups"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string randomization = "gaussian";
    std::string metric = "delta2";
    std::string matrix_path, suite = "hyperoct-core";
    bool exhaustive = false;
    double eps_min = 1.0 / 64, eps_max = 2.0;
    int eps_points = 64;
    std::size_t budget = 4000, cap = 200000, exhaustive_cap = 200;

    auto add_common = [&](CLI::App* sub, bool needs_group) {
        if (needs_group) sub->add_option("--group", o.group, "group spec, e.g. hyperoct:8")->required();
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "json or csv");
        sub->add_option("--samples", o.samples, "Monte Carlo sample count");
        sub->add_option("--angles", o.angles, "phase-sweep grid size (0 = auto)");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--threads", o.threads, "worker cap; never changes results");
    };

    auto* cdist = app.add_subcommand("char-dist", "exact character distribution and tails");
    add_common(cdist, true);
    auto* ez = app.add_subcommand("ez", "Monte Carlo estimate of E sup |tr(u pi(g))|");
    add_common(ez, true);
    ez->add_option("--randomization", randomization, "gaussian or haar");
    auto* ent = app.add_subcommand("entropy", "covering-number brackets and entropy integrals");
    add_common(ent, true);
    ent->add_option("--eps-min", eps_min, "smallest eps");
    ent->add_option("--eps-max", eps_max, "largest eps (<= 2)");
    ent->add_option("--eps-points", eps_points, "geometric grid size");
    ent->add_option("--metric", metric, "delta2, delta-inf or scaled-frobenius");
    ent->add_option("--budget", budget, "max group order for greedy cover/packing");
    auto* psi = app.add_subcommand("psi2", "psi2 norm of the character (C2)");
    add_common(psi, true);
    auto* sup = app.add_subcommand("sup", "supremum oracle and density defect for a matrix");
    add_common(sup, true);
    sup->add_option("--matrix", matrix_path, "JSON matrix file")->required();
    sup->add_flag("--exhaustive", exhaustive, "brute force over all group elements");
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    add_common(ver, false);
    ver->add_option("--suite", suite, "builtin suite name or JSON config path");
    auto* jor = app.add_subcommand("jordan", "closure, abelian index and irreducibility");
    add_common(jor, true);
    jor->add_option("--exhaustive-cap", exhaustive_cap, "exhaustive abelian search bound");

    o.samples = 0;  // sentinel: only override suite defaults when given
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << error_json("usage", e.what()).dump() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (o.samples <= 0 && !ver->parsed()) o.samples = 400;
        if (cdist->parsed()) rc = cmd_char_dist(o);
        else if (ez->parsed()) rc = cmd_ez(o, randomization);
        else if (ent->parsed()) rc = cmd_entropy(o, eps_min, eps_max, eps_points, metric, budget);
        else if (psi->parsed()) rc = cmd_psi2(o);
        else if (sup->parsed()) rc = cmd_sup(o, matrix_path, exhaustive, cap);
        else if (ver->parsed()) rc = cmd_verify(o, suite);
        else if (jor->parsed()) rc = cmd_jordan(o, exhaustive_cap);
    } catch (const uglab::DomainError& e) {
        std::cerr << error_json("domain", e.what()).dump() << "\n";
        return 2;
    } catch (const uglab::UnsupportedSpecError& e) {
        std::cerr << error_json("unsupported-spec", e.what()).dump() << "\n";
        return 2;
    } catch (const uglab::PrecisionError& e) {
        std::cerr << error_json("precision", e.what()).dump() << "\n";
        return 3;
    } catch (const uglab::ClosureCapError& e) {
        std::cerr << error_json("closure-cap", e.what()).dump() << "\n";
        return 3;
    } catch (const uglab::NumericError& e) {
        std::cerr << error_json("numeric", e.what()).dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()).dump() << "\n";
        return 3;
    }
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << "# wall_time_s=" << elapsed << "\n";
    return rc;
}
