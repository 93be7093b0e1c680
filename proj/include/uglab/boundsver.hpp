// Closed-form bound formulas and the verification engine that assembles
// computed quantities into pass/fail inequality reports.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "uglab/rational.hpp"

namespace uglab::boundsver {

struct JordanBound {
    BigInt value;        // (d+1)!
    bool asserted;       // the factorial bound is asserted only for d >= 71
};
JordanBound jordan_bound(long d);

// c * d^2 / ln d; a non-rigorous growth-order bound (constant unknown).
double blichfeldt_log_bound(long d, double c);

struct BoundFormula {
    std::string name;
    std::map<std::string, double> params;
    double value;
    bool log_scale;
};

// Names: el1_cover(k,d,eps) [log], tb2(k,d), lp2(k,d,cprime),
// t10_upper(d,c1), t10_lower(d,c2), pe31_lower(d), pe31_upper(k),
// pe32(d,eps,c3), solvable(d,C).
BoundFormula formula_bank(const std::string& name, const std::map<std::string, double>& params);

struct Check {
    std::string name;
    std::string subject;  // e.g. "hyperoct:8"
    double lhs = 0.0;
    std::string relation;  // "<=" or ">="
    double rhs = 0.0;
    double slack = 0.0;       // how far inside the inequality the check sits
    std::string confidence;   // exact | 4-sem | fitted-constant | informational
    bool pass = false;
    std::string note;
};

struct SuiteConfig {
    std::string name = "custom";
    std::vector<std::string> groups;
    std::vector<int> dims;
    long samples = 400;
    int angles = 512;
    std::uint64_t seed = 1;
    int threads = 1;
    std::map<std::string, double> constants;
    std::vector<std::string> checks;
};

struct VerificationReport {
    std::vector<Check> checks;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config;
    bool all_pass() const;
};

// Builtin suites: "hyperoct-core" (exact combinatorial/entropy checks),
// "growth" (Monte Carlo growth rates), "fl1" (C2/C3 equivalence family).
SuiteConfig builtin_suite(const std::string& name);
SuiteConfig suite_from_json(const nlohmann::json& j);
nlohmann::ordered_json suite_to_json(const SuiteConfig& c);

VerificationReport run_verification(const SuiteConfig& config);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
std::string report_to_csv(const VerificationReport& r);

}  // namespace uglab::boundsver
