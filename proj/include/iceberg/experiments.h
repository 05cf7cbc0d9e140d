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

#ifndef ICEBERG_EXPERIMENTS_H
#define ICEBERG_EXPERIMENTS_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iceberg/decoder.h"
#include "iceberg/gadgets.h"

namespace iceberg {

enum class ExperimentKind { RepeatedEC, TransversalCNOT, TeleportedCNOT, CodeCapacity, FactoryOverhead, FaultHistogram };
const char *to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string &s);

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One experiment over a grid of p values.
struct ExperimentSpec {
    std::string label;
    ExperimentKind kind = ExperimentKind::RepeatedEC;
    std::string code = "c2026";
    std::vector<double> p = {1e-3};
    uint64_t rounds = 10;
    uint64_t shots = 100000;
    uint64_t seed = 1;
    std::string decoder = "lookup";  // or "correlated" (extension point, needs a table)
    bool two_stage = false;          // factory mode
    VerifyVariant variant = VerifyVariant::Heavy;
    Basis basis = Basis::Zero;       // repeated EC: prepared and measured basis
    void validate() const;
};

/// Parses "key = value" lines ('#' comments, sections "[label]" start a new
/// experiment) or a JSON object / array of objects.
std::vector<ExperimentSpec> parse_specs(const std::string &text);

/// Shared settings of the memory and CNOT experiments.
struct EcRunConfig {
    std::string code;
    double p = 1e-3;
    uint64_t rounds = 10;
    uint64_t shots = 10000;
    uint64_t seed = 1;
    size_t workers = 1;
    VerifyVariant variant = VerifyVariant::Heavy;
    Basis basis = Basis::Zero;
};

/// Verified |0^k> prep, `rounds` rounds of Z- then X-error correction by
/// teleportation, transversal Z measurement and an ideal decode; a logical
/// error is a flipped logical Z outcome. With basis Plus the roles swap
/// (|+^k>, X measurement, logical Z errors). Rejections: any decoder REJECT.
/// Ancilla verification failures only cost retries.
RatesReport run_repeated_ec(const EcRunConfig &cfg);
/// Two perfect blocks, one leading EC on both, then `rounds` x (transversal
/// CNOT; EC on both). Perfect final decode of both blocks and both types.
RatesReport run_transversal_cnot(const EcRunConfig &cfg);
/// `rounds` x (CNOT by teleportation through a Bell pair; Z-EC on the
/// control; X-EC on the target), perfect final decode.
RatesReport run_teleported_cnot(const EcRunConfig &cfg);

struct FaultOrderHistogram {
    double p = 0;
    uint64_t samples = 0;
    uint64_t logical_shots = 0;
    uint64_t rejected_shots = 0;
    std::map<size_t, uint64_t> logical;    // minimal fault-subset size -> count
    std::map<size_t, uint64_t> rejection;
    uint64_t greedy = 0;  // shots whose fault set was too large for exhaustive search
    std::string to_json() const;
};

/// Repeated EC with fault recording. Each shot ending in a logical error or
/// a rejection is replayed on subsets of its faults, in increasing size, to
/// find the smallest subset with the same outcome.
FaultOrderHistogram fault_order_histogram(const EcRunConfig &cfg);

/// One recorded fault of the memory experiment. `slot` numbers the noisy
/// operations of a shot in execution order.
struct ShotFault {
    uint32_t slot;
    uint32_t where;  // prep site, or qubit of a CNOT/measurement layer
    uint8_t choice;
    auto operator<=>(const ShotFault &) const = default;
};
enum class ShotOutcome { Accepted, LogicalError, Rejected, Invalid };
struct RecordedShot {
    ShotOutcome outcome;
    std::vector<ShotFault> faults;
};
/// Samples repeated-EC shots with their fault lists (faults of rejected
/// ancilla attempts are not kept). With failures_only, accepted shots without
/// a logical error are dropped.
std::vector<RecordedShot> sample_recorded_shots(const EcRunConfig &cfg, bool failures_only);
/// Replays a repeated-EC shot with an explicit fault list. Invalid when a
/// prep subset would not pass its own verification.
ShotOutcome replay_repeated_ec(const EcRunConfig &cfg, const std::vector<ShotFault> &faults);
/// Smallest subset of `faults` reproducing `target`; exhaustive up to
/// 12 faults, greedy removal above (`exhaustive` reports which).
std::vector<ShotFault> minimal_fault_subset(const EcRunConfig &cfg, const std::vector<ShotFault> &faults,
                                            ShotOutcome target, bool *exhaustive = nullptr);

struct OverheadReport {
    std::string code;
    double p = 0;
    bool two_stage = false;
    std::vector<double> acceptance;  // one-stage: whole prep; two-stage: inner |0>, inner |+>, second stage
    double expected_cnots = 0;
    uint64_t cnots_per_attempt = 0;  // whole circuit (one-stage) or second stage
    std::string to_json() const;
};
/// Expected CNOTs per accepted |0^k> (or |+^k>) out of an ancilla factory.
OverheadReport factory_overhead(const std::string &code, double p, bool two_stage, uint64_t shots, uint64_t seed,
                                VerifyVariant variant = VerifyVariant::Heavy, Basis basis = Basis::Zero,
                                size_t workers = 1);

/// -ln(acceptance_floor) / pL_star: the p_R / p_L ratio above which the
/// acceptance requirement, not the error budget, limits circuit size.
double postselection_budget(double pL_star, double acceptance_floor);
/// Largest number of operations meeting both budgets.
double max_operations(double pL_star, double acceptance_floor, double p_L, double p_R);

enum class EcStyle { Steane, Knill };
/// Steane: r0 + 2 r_plus + 3 r_cnot + r_meas. Knill: r_bell + r_cnot + r_meas,
/// with r_bell passed as r0 (r_plus ignored).
double steady_state_estimate(double r0, double r_plus, double r_cnot, double r_meas, EcStyle style);

struct SeriesCoefficients {
    size_t logical_weight = 0;  // d/2 + 1
    size_t reject_weight = 0;   // d/2
    uint64_t logical = 0;
    uint64_t reject = 0;
    FaultCountReport counts;
};
/// Leading code-capacity coefficients for bit flips (X errors).
SeriesCoefficients exact_series_check(const std::string &code, size_t max_weight, size_t workers = 1);

/// Cached lookup decoders of a catalog code.
const DecoderTable &catalog_decoder(const std::string &code, PauliType type);

/// 16 hex digits identifying the code and circuit recipes a spec runs on.
std::string recipe_hash(const ExperimentSpec &spec);

/// Runs one spec over its p grid.
struct ExperimentResult {
    std::vector<RatesReport> rates;
    std::vector<FaultOrderHistogram> histograms;
    std::vector<OverheadReport> overheads;
};
ExperimentResult run_experiment(const ExperimentSpec &spec, size_t workers);

}  // namespace iceberg

#endif
