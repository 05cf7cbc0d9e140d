// Copyright 2026 The iceberg-qec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by id; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "iceberg/checks.h"
#include "iceberg/code_factory.h"
#include "iceberg/experiments.h"

using namespace iceberg;

namespace {

size_t workers() {
    if (const char *env = std::getenv("ICEBERG_WORKERS")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

EcRunConfig ec(const std::string &code, double p, uint64_t shots, uint64_t seed) {
    EcRunConfig c;
    c.code = code;
    c.p = p;
    c.shots = shots;
    c.seed = seed;
    c.workers = workers();
    return c;
}

// Shared runs, computed on first use.
std::map<std::string, RatesReport> g_runs;
double g_ec_seconds = 0;

const RatesReport &repeated(const std::string &code, double p, uint64_t shots, Basis basis = Basis::Zero) {
    std::string key = code + "/" + fmt(p) + "/" + std::to_string(shots) + "/" + to_string(basis);
    auto it = g_runs.find(key);
    if (it != g_runs.end()) return it->second;
    EcRunConfig c = ec(code, p, shots, 1000 + g_runs.size());
    c.basis = basis;
    auto t0 = std::chrono::steady_clock::now();
    RatesReport r = run_repeated_ec(c);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (code == "c2026" && p == 1e-3 && basis == Basis::Zero) g_ec_seconds = secs;
    std::cerr << "  " << key << ": p_L=" << r.p_L() << " (" << r.logical_errors << ") p_R=" << r.p_R() << " in "
              << secs << "s\n";
    return g_runs.emplace(key, r).first->second;
}

Verdict from_check(const CheckResult &r) { return {r.pass, r.detail}; }

Verdict exact_counts() { return from_check(check_c3628_counts(workers())); }

Verdict budget_constants() { return from_check(check_budget_constants()); }

Verdict code_parameters() {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r = check_code_distances();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {r.pass && secs <= 600, r.detail + " in " + fmt(secs) + "s"};
}

Verdict method_equivalence() { return from_check(check_concatenation_methods()); }

Verdict gadget_identities() { return from_check(check_gadget_identities()); }

Verdict oracle_equivalence() {
    bool ok = true;
    std::ostringstream os;
    const uint64_t shots = 1000000;
    for (const char *name : {"c422", "c1224"}) {
        const DecoderTable &table = catalog_decoder(name, PauliType::X);
        FaultCountReport full = enumerate_fault_counts(table, table.n(), workers());
        for (double p : {0.01, 0.05, 0.1}) {
            double pr = series_reject(full, table.n(), p);
            double pl = series_logical(full, table.n(), p) / (1 - pr);
            RatesReport r = code_capacity_sample(table, p, shots, 77, workers());
            double sr = std::sqrt(pr * (1 - pr) / shots);
            double sl = std::sqrt(pl * (1 - pl) / double(r.accepted));
            double zr = sr > 0 ? std::abs(r.p_R() - pr) / sr : (r.p_R() == pr ? 0 : INFINITY);
            double zl = sl > 0 ? std::abs(r.p_L() - pl) / sl : (r.p_L() == pl ? 0 : INFINITY);
            ok &= zr <= 3 && zl <= 3;
            os << name << "@" << p << " z_R=" << fmt(zr) << " z_L=" << fmt(zl) << "; ";
        }
    }
    return {ok, os.str()};
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); i++) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); i++) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

Verdict scaling_exponents() {
    std::vector<double> ps = {2e-3, 3e-3, 4e-3}, pl, pr;
    for (double p : ps) {
        const RatesReport &r = repeated("c2026", p, 10000000);
        pl.push_back(r.p_L());
        pr.push_back(r.p_R());
    }
    if (std::find(pl.begin(), pl.end(), 0.0) != pl.end()) return {false, "no logical errors at some p"};
    double sl = slope(ps, pl), sr = slope(ps, pr);
    bool ok = sl >= 3.5 && sl <= 4.5 && sr >= 2.5 && sr <= 3.5;
    return {ok, "c2026 slope p_L=" + fmt(sl) + " (want [3.5,4.5]), p_R=" + fmt(sr) + " (want [2.5,3.5])"};
}

Verdict table_magnitude() {
    const uint64_t shots = 100000000;  // 1e9 rounds
    const RatesReport &r = repeated("c2026", 1e-3, shots);
    double per_worker = double(shots) / g_ec_seconds / double(workers());
    double on8 = per_worker * 8;
    bool rates = r.p_L() >= 2e-7 && r.p_L() <= 1e-5 && r.p_R() >= 2e-5 && r.p_R() <= 4e-4;
    bool speed = on8 >= 3e5;
    return {rates && speed, "c2026@1e-3 p_L=" + fmt(r.p_L()) + " p_R=" + fmt(r.p_R()) + "; " +
                                fmt(per_worker) + " shots/s per worker (" + std::to_string(workers()) +
                                " workers), " + fmt(on8) + " scaled to 8 cores (want >= 3e5)"};
}

Verdict ratio_bounds() {
    const RatesReport &base = repeated("c2026", 2e-3, 10000000);
    EcRunConfig c = ec("c2026", 2e-3, 1000000, 31);
    RatesReport tc = run_transversal_cnot(c);
    c.seed = 32;
    RatesReport tp = run_teleported_cnot(c);
    double rr = tc.p_R() / base.p_R(), lr = tc.p_L() / base.p_L();
    bool ok = rr > 1.8 && lr > 4 && tp.p_R() <= tc.p_R();
    return {ok, "transversal/EC p_R ratio=" + fmt(rr) + " p_L ratio=" + fmt(lr) + "; teleported p_R=" +
                    fmt(tp.p_R()) + " transversal p_R=" + fmt(tc.p_R())};
}

Verdict two_stage_factory() {
    bool ok = true;
    std::ostringstream os;
    for (const char *name : {"c3628", "c4848"}) {
        OverheadReport one = factory_overhead(name, 4e-3, false, 200000, 41, VerifyVariant::Heavy, Basis::Zero,
                                              workers());
        OverheadReport two = factory_overhead(name, 4e-3, true, 200000, 42, VerifyVariant::Heavy, Basis::Zero,
                                              workers());
        double cut = 1 - two.expected_cnots / one.expected_cnots;
        ok &= cut >= 0.15;
        os << name << " one-stage " << fmt(one.expected_cnots) << " two-stage " << fmt(two.expected_cnots)
           << " (-" << fmt(100 * cut) << "%); ";
    }
    return {ok, os.str()};
}

Verdict budget_sanity() {
    bool ok = true;
    std::ostringstream os;
    // Total rate: logical X errors of the |0> memory plus logical Z errors of
    // the |+> memory; p_R averaged over both.
    for (auto [name, shots] : {std::pair{"c2026", uint64_t{20000000}}, std::pair{"c3628", uint64_t{5000000}}}) {
        const RatesReport &x = repeated(name, 1e-3, std::string(name) == "c2026" ? 100000000 : shots);
        const RatesReport &z = repeated(name, 1e-3, shots, Basis::Plus);
        double pl = x.p_L() + z.p_L();
        double pr = (x.p_R() + z.p_R()) / 2;
        double ratio = pl > 0 ? pr / pl : INFINITY;
        ok &= ratio < 300;
        os << name << " p_L=" << fmt(x.p_L()) << "+" << fmt(z.p_L()) << " p_R=" << fmt(pr) << " ratio=" << fmt(ratio)
           << "; ";
    }
    return {ok, os.str()};
}

Verdict fault_injection() {
    return from_check(check_prep_injection({"c1224", "c1644", "c2026", "c3246", "c3628", "c4848"}, workers()));
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"exact-combinatorics", exact_counts},
        {"budget-constants", budget_constants},
        {"code-parameters", code_parameters},
        {"method-equivalence", method_equivalence},
        {"gadget-identities", gadget_identities},
        {"oracle-equivalence", oracle_equivalence},
        {"scaling-exponents", scaling_exponents},
        {"rate-magnitude", table_magnitude},
        {"cnot-ratio-bounds", ratio_bounds},
        {"two-stage-factory", two_stage_factory},
        {"budget-sanity", budget_sanity},
        {"fault-injection", fault_injection},
    };
    std::set<std::string> only(argv + 1, argv + argc);
    int failures = 0;
    for (const auto &[id, fn] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = fn();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (v.pass ? "PASS " : "FAIL ") << id << ": " << v.detail << " [" << fmt(secs) << "s]"
                  << std::endl;
        failures += !v.pass;
    }
    return failures ? 1 : 0;
}
