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

// Command-line front end: code inspection, decoder tables, experiments,
// exact checks and a throughput benchmark.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "iceberg/checks.h"
#include "iceberg/code_factory.h"
#include "iceberg/experiments.h"

using namespace iceberg;
namespace fs = std::filesystem;

namespace {

constexpr const char *kSchema = "# iceberg-results v1";

size_t default_workers() {
    if (const char *env = std::getenv("ICEBERG_WORKERS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<size_t>(v);
        } catch (const std::exception &) {
        }
        std::cerr << "ignoring ICEBERG_WORKERS=" << env << "\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to out/name when an output directory is set, else to stdout.
void emit(const std::string &out_dir, const std::string &name, const std::string &body) {
    if (out_dir.empty()) {
        std::cout << body;
        return;
    }
    fs::create_directories(out_dir);
    std::ofstream f(fs::path(out_dir) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
    f << body;
    std::cerr << "wrote " << (fs::path(out_dir) / name).string() << "\n";
}

nlohmann::json code_json(const StabilizerCode &c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["n"] = c.n;
    j["k"] = c.k;
    if (c.d_known) j["d"] = *c.d_known;
    j["css"] = c.is_css();
    for (const auto &g : c.generators) j["generators"].push_back(g.str());
    for (const auto &l : c.logical_x) j["logical_x"].push_back(l.str());
    for (const auto &l : c.logical_z) j["logical_z"].push_back(l.str());
    return j;
}

int cmd_codes(const std::string &action, const std::string &name, const std::string &out, bool json) {
    if (action == "list") {
        for (const auto &e : catalog_entries()) {
            std::cout << e.name << "\t[[" << e.n << "," << e.k << "," << e.d << "]]\t" << e.recipe << "\n";
        }
        return 0;
    }
    if (action == "export") {
        if (out.empty()) throw CLI::ValidationError("codes export needs --out");
        for (const auto &e : catalog_entries()) emit(out, e.name + ".txt", to_text(catalog(e.name)));
        return 0;
    }
    if (name.empty()) throw CLI::ValidationError("codes " + action + " needs a code name");
    const StabilizerCode &code = catalog(name);
    if (action == "show") {
        std::cout << (json ? code_json(code).dump(2) + "\n" : to_text(code));
        return 0;
    }
    if (action == "distance") {
        if (code.is_css()) {
            auto [dx, dz] = css_distance(code);
            std::cout << std::min(dx, dz) << "\n";
            std::cerr << "d_x=" << dx << " d_z=" << dz << "\n";
        } else {
            std::cout << brute_force_distance(code) << "\n";
        }
        return 0;
    }
    throw CLI::ValidationError("unknown codes action '" + action + "'");
}

int cmd_tables(const std::string &name, const std::string &type, const std::string &out) {
    std::vector<PauliType> types;
    if (type == "X" || type == "both") types.push_back(PauliType::X);
    if (type == "Z" || type == "both") types.push_back(PauliType::Z);
    if (types.empty()) throw CLI::ValidationError("--type must be X, Z or both");
    for (PauliType t : types) {
        const DecoderTable &table = catalog_decoder(name, t);
        size_t syndromes = size_t{1} << table.num_checks();
        std::cout << name << " " << to_string(t) << ": checks=" << table.num_checks()
                  << " weight_cap=" << table.weight_cap() << " reject=" << table.num_reject_syndromes() << "/"
                  << syndromes << "\n";
        if (!out.empty()) {
            fs::create_directories(out);
            fs::path path = fs::path(out) / (name + "_" + to_string(t) + ".tbl");
            std::ofstream f(path, std::ios::binary);
            table.write_binary(f);
            std::cerr << "wrote " << path.string() << "\n";
        }
    }
    return 0;
}

std::string overhead_csv_header() { return "code,p,mode,acceptance,expected_cnots,cnots_per_attempt,seed"; }

std::string overhead_csv_row(const OverheadReport &r, uint64_t seed) {
    std::ostringstream os;
    os << r.code << "," << r.p << "," << (r.two_stage ? "two-stage" : "one-stage") << ",";
    for (size_t i = 0; i < r.acceptance.size(); i++) os << (i ? ";" : "") << r.acceptance[i];
    os << "," << r.expected_cnots << "," << r.cnots_per_attempt << "," << seed;
    return os.str();
}

int cmd_run(const std::string &spec_path, const std::string &out, std::optional<uint64_t> seed,
            std::optional<uint64_t> shots, size_t workers) {
    std::vector<ExperimentSpec> specs = parse_specs(read_file(spec_path));
    for (size_t i = 0; i < specs.size(); i++) {
        ExperimentSpec s = specs[i];
        if (seed) s.seed = *seed;
        if (shots) s.shots = *shots;
        std::string label = s.label.empty() ? "experiment" + std::to_string(i) : s.label;
        std::string hash = recipe_hash(s);
        std::cerr << "running " << label << " (" << to_string(s.kind) << ", " << s.code << ")\n";
        ExperimentResult res = run_experiment(s, workers);
        std::ostringstream csv;
        csv << kSchema << " label=" << label << " kind=" << to_string(s.kind) << " code=" << s.code
            << " seed=" << s.seed << " recipe=" << hash << "\n";
        if (!res.rates.empty()) {
            csv << RatesReport::csv_header() << ",recipe\n";
            for (const auto &r : res.rates) csv << r.csv_row() << "," << hash << "\n";
            emit(out, label + ".csv", csv.str());
        }
        if (!res.overheads.empty()) {
            csv << overhead_csv_header() << ",recipe\n";
            for (const auto &r : res.overheads) csv << overhead_csv_row(r, s.seed) << "," << hash << "\n";
            emit(out, label + ".csv", csv.str());
        }
        if (!res.histograms.empty()) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto &h : res.histograms) j.push_back(nlohmann::json::parse(h.to_json()));
            nlohmann::json doc{{"schema", "iceberg-histogram v1"}, {"label", label}, {"code", s.code},
                               {"seed", s.seed}, {"recipe", hash}, {"points", j}};
            emit(out, label + ".json", doc.dump(2) + "\n");
        }
    }
    return 0;
}

int cmd_verify(bool quick, const std::string &catalog_dir, size_t workers) {
    std::vector<CheckResult> results;
    if (catalog_dir.empty()) {
        results = exact_checks(!quick, workers);
    } else {
        results = check_catalog_files(catalog_dir);
        if (results.empty()) throw std::runtime_error("no .txt code files in " + catalog_dir);
    }
    bool ok = true;
    for (const auto &r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        ok &= r.pass;
    }
    return ok ? 0 : 1;
}

int cmd_bench(const std::string &code, double p, uint64_t shots, size_t workers) {
    EcRunConfig cfg;
    cfg.code = code;
    cfg.p = p;
    cfg.shots = std::min<uint64_t>(shots, 4096);
    cfg.workers = workers;
    run_repeated_ec(cfg);  // warm the recipe and decoder caches
    cfg.shots = shots;
    auto t0 = std::chrono::steady_clock::now();
    RatesReport r = run_repeated_ec(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json j{{"code", code},          {"p", p},
                     {"shots", shots},        {"rounds", cfg.rounds},
                     {"workers", workers},    {"seconds", secs},
                     {"shots_per_second", shots / secs},
                     {"shots_per_second_per_worker", shots / secs / double(workers)},
                     {"p_L", r.p_L()},        {"p_R", r.p_R()}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Concatenated Iceberg codes: construction, circuits and fault simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    size_t workers = default_workers();
    std::string out;
    app.add_option("--workers", workers, "worker threads (default: $ICEBERG_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);

    auto *codes = app.add_subcommand("codes", "list | show <name> | distance <name> | export --out DIR");
    std::string action, name;
    bool json = false;
    codes->add_option("action", action)->required()->check(CLI::IsMember({"list", "show", "distance", "export"}));
    codes->add_option("name", name);
    codes->add_flag("--json", json, "show: JSON output");
    codes->add_option("--out", out, "export directory");

    auto *tables = app.add_subcommand("tables", "build lookup decoder tables");
    std::string table_code, table_type = "both";
    tables->add_option("code", table_code)->required();
    tables->add_option("--type", table_type, "X, Z or both");
    tables->add_option("--out", out, "write binary tables here");

    auto *run = app.add_subcommand("run", "run an experiment spec file");
    std::string spec_path;
    std::optional<uint64_t> seed, shots;
    run->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (default: stdout)");
    run->add_option("--seed", seed, "override the spec seed");
    run->add_option("--shots", shots, "override the spec shot count")->check(CLI::PositiveNumber);

    auto *verify = app.add_subcommand("verify", "exact checks");
    bool quick = false;
    std::string catalog_dir;
    verify->add_flag("--quick", quick, "skip the [[36,2,8]] fault-count enumeration");
    verify->add_option("--catalog", catalog_dir, "check exported code files in DIR instead")
        ->check(CLI::ExistingDirectory);

    auto *bench = app.add_subcommand("bench", "repeated-EC sampling throughput");
    std::string bench_code = "c2026";
    double bench_p = 1e-3;
    uint64_t bench_shots = 200000;
    bench->add_option("--code", bench_code);
    bench->add_option("--p", bench_p);
    bench->add_option("--shots", bench_shots)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*codes) return cmd_codes(action, name, out, json);
        if (*tables) return cmd_tables(table_code, table_type, out);
        if (*run) return cmd_run(spec_path, out, seed, shots, workers);
        if (*verify) return cmd_verify(quick, catalog_dir, workers);
        if (*bench) return cmd_bench(bench_code, bench_p, bench_shots, workers);
    } catch (const CLI::Error &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
