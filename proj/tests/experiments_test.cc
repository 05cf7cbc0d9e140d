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

#include <gtest/gtest.h>

#include <cmath>

#include "iceberg/code_factory.h"
#include "iceberg/experiments.h"

namespace iceberg {
namespace {

EcRunConfig config(const std::string &code, double p, uint64_t shots, uint64_t rounds = 10) {
    EcRunConfig c;
    c.code = code;
    c.p = p;
    c.shots = shots;
    c.rounds = rounds;
    c.seed = 7;
    return c;
}

// Slot of the final transversal measurement: one data prep, then six slots per round.
uint32_t final_slot(uint64_t rounds) { return static_cast<uint32_t>(1 + 6 * rounds); }

TEST(RepeatedEc, NoiselessRunHasZeroRates) {
    for (Basis b : {Basis::Zero, Basis::Plus}) {
        EcRunConfig c = config("c1224", 0.0, 2000);
        c.basis = b;
        RatesReport r = run_repeated_ec(c);
        EXPECT_EQ(r.shots, 2000u);
        EXPECT_EQ(r.accepted, 2000u);
        EXPECT_EQ(r.logical_errors, 0u);
        EXPECT_EQ(r.p_L(), 0.0);
        EXPECT_EQ(r.p_R(), 0.0);
    }
}

TEST(CnotExperiments, NoiselessRunsHaveZeroRates) {
    EcRunConfig c = config("c2026", 0.0, 1000);
    for (const RatesReport &r : {run_transversal_cnot(c), run_teleported_cnot(c)}) {
        EXPECT_EQ(r.accepted, 1000u) << r.descriptor;
        EXPECT_EQ(r.logical_errors, 0u) << r.descriptor;
    }
}

TEST(RepeatedEc, IndependentOfWorkerCount) {
    EcRunConfig c = config("c1224", 3e-3, 20000);
    RatesReport one = run_repeated_ec(c);
    c.workers = 3;
    RatesReport three = run_repeated_ec(c);
    EXPECT_EQ(one.accepted, three.accepted);
    EXPECT_EQ(one.logical_errors, three.logical_errors);
    EXPECT_GT(one.rejected(), 0u);
}

TEST(RepeatedEc, RejectionsGrowWithP) {
    RatesReport lo = run_repeated_ec(config("c1224", 1e-3, 20000));
    RatesReport hi = run_repeated_ec(config("c1224", 4e-3, 20000));
    EXPECT_GT(hi.p_R(), 4 * lo.p_R());
}

TEST(Replay, RecordedFaultsReproduceSampledOutcome) {
    EcRunConfig c = config("c1224", 4e-3, 3000, 3);
    auto shots = sample_recorded_shots(c, false);
    ASSERT_EQ(shots.size(), 3000u);
    size_t failures = 0;
    for (const auto &s : shots) {
        EXPECT_EQ(replay_repeated_ec(c, s.faults), s.outcome);
        failures += s.outcome != ShotOutcome::Accepted;
    }
    EXPECT_GT(failures, 0u);
}

TEST(Replay, NoFaultsIsAccepted) {
    EXPECT_EQ(replay_repeated_ec(config("c2026", 1e-3, 1), {}), ShotOutcome::Accepted);
}

TEST(MinimalSubset, SingleFaultHasOrderOne) {
    // A lone readout flip on a distance-4 code is corrected.
    EcRunConfig c = config("c1224", 1e-3, 1, 2);
    const StabilizerCode &code = catalog("c1224");
    auto support = code.logical_x[0].xs.set_bits();
    ASSERT_EQ(support.size(), 4u);
    std::vector<ShotFault> one = {{final_slot(2), static_cast<uint32_t>(support[0]), 0}};
    ShotOutcome o = replay_repeated_ec(c, one);
    EXPECT_EQ(o, ShotOutcome::Accepted);
    // Any sampled single-fault failure has order 1.
    EcRunConfig hi = config("c1224", 4e-3, 4000, 3);
    size_t checked = 0;
    for (const auto &s : sample_recorded_shots(hi, true)) {
        if (s.faults.size() != 1) continue;
        EXPECT_EQ(minimal_fault_subset(hi, s.faults, s.outcome).size(), 1u);
        checked++;
    }
    SUCCEED() << checked << " single-fault failures";
}

TEST(MinimalSubset, HandBuiltThreeFaultRecordNeedsTwo) {
    EcRunConfig c = config("c1224", 1e-3, 1, 2);
    const StabilizerCode &code = catalog("c1224");
    auto support = code.logical_x[0].xs.set_bits();
    ShotFault a{final_slot(2), static_cast<uint32_t>(support[0]), 0};
    ShotFault b{final_slot(2), static_cast<uint32_t>(support[1]), 0};
    // A weight-1 Z-basis measurement flip in the first round: corrected.
    ShotFault extra{3, 5, 0};
    ASSERT_EQ(replay_repeated_ec(c, {a}), ShotOutcome::Accepted);
    ASSERT_EQ(replay_repeated_ec(c, {b}), ShotOutcome::Accepted);
    ASSERT_EQ(replay_repeated_ec(c, {extra}), ShotOutcome::Accepted);
    // Half of a minimum-weight logical is equidistant from two codewords.
    ASSERT_EQ(replay_repeated_ec(c, {a, b}), ShotOutcome::Rejected);
    std::vector<ShotFault> record = {extra, a, b};
    ASSERT_EQ(replay_repeated_ec(c, record), ShotOutcome::Rejected);
    bool exhaustive = false;
    auto m = minimal_fault_subset(c, record, ShotOutcome::Rejected, &exhaustive);
    EXPECT_TRUE(exhaustive);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0], a);
    EXPECT_EQ(m[1], b);
}

TEST(MinimalSubset, FullLogicalFlipNeedsMoreThanHalf) {
    // Flipping all four qubits of a weight-4 logical at readout is a logical
    // error; three of them already decode to the complement.
    EcRunConfig c = config("c1224", 1e-3, 1, 1);
    auto support = catalog("c1224").logical_x[0].xs.set_bits();
    std::vector<ShotFault> record;
    for (size_t q : support) record.push_back({final_slot(1), static_cast<uint32_t>(q), 0});
    ASSERT_EQ(replay_repeated_ec(c, record), ShotOutcome::LogicalError);
    EXPECT_EQ(minimal_fault_subset(c, record, ShotOutcome::LogicalError).size(), 3u);
}

TEST(Histogram, LogicalOrderRespectsFaultToleranceFloor) {
    EcRunConfig c = config("c1224", 5e-3, 4000, 3);
    FaultOrderHistogram h = fault_order_histogram(c);
    EXPECT_GT(h.rejected_shots, 0u);
    for (auto [order, count] : h.logical) EXPECT_GE(order, 2u) << count;
    for (auto [order, count] : h.rejection) EXPECT_GE(order, 1u) << count;
    uint64_t total = 0;
    for (auto [order, count] : h.rejection) total += count;
    EXPECT_EQ(total, h.rejected_shots);
    auto j = h.to_json();
    EXPECT_NE(j.find("\"rejection\""), std::string::npos);
}

TEST(Budget, CriticalRatios) {
    EXPECT_NEAR(postselection_budget(0.01, 0.05), 299.57, 0.01);
    EXPECT_NEAR(postselection_budget(0.01, 0.10), 230.26, 0.01);
    EXPECT_NEAR(postselection_budget(0.01, 0.01), 460.52, 0.01);
    EXPECT_THROW(postselection_budget(0.0, 0.5), std::domain_error);
    EXPECT_THROW(postselection_budget(0.01, 1.0), std::domain_error);
    EXPECT_THROW(postselection_budget(1.5, 0.5), std::domain_error);
}

TEST(Budget, MaxOperationsTakesTheBindingLimit) {
    // Error budget binds: 0.01 / 1e-6 = 1e4 < -ln(0.05) / 1e-6.
    EXPECT_NEAR(max_operations(0.01, 0.05, 1e-6, 1e-6), 1e4, 1e-6);
    // Acceptance binds.
    EXPECT_NEAR(max_operations(0.01, 0.05, 1e-7, 1e-3), -std::log(0.05) / 1e-3, 1e-9);
}

TEST(SteadyState, Formulas) {
    EXPECT_DOUBLE_EQ(steady_state_estimate(0.1, 0.1, 0.1, 0.1, EcStyle::Steane), 0.7);
    EXPECT_DOUBLE_EQ(steady_state_estimate(0, 0, 0, 0, EcStyle::Steane), 0.0);
    EXPECT_DOUBLE_EQ(steady_state_estimate(0, 0, 0, 0, EcStyle::Knill), 0.0);
    EXPECT_DOUBLE_EQ(steady_state_estimate(1, 100, 2, 4, EcStyle::Knill), 7.0);
    EXPECT_DOUBLE_EQ(steady_state_estimate(1, 2, 3, 4, EcStyle::Steane), 1 + 4 + 9 + 4);
}

TEST(Series, SmallCodes) {
    SeriesCoefficients s = exact_series_check("c422", 2);
    EXPECT_EQ(s.reject_weight, 1u);
    EXPECT_EQ(s.logical_weight, 2u);
    EXPECT_EQ(s.reject, 4u);
    EXPECT_EQ(s.logical, 6u);
    SeriesCoefficients t = exact_series_check("c1224", 3);
    EXPECT_EQ(t.reject_weight, 2u);
    EXPECT_EQ(t.logical_weight, 3u);
    // Below the leading orders nothing fails.
    EXPECT_EQ(t.counts.n_reject[1], 0u);
    EXPECT_EQ(t.counts.n_logical[2], 0u);
    EXPECT_GT(t.reject, 0u);
    EXPECT_GT(t.logical, 0u);
}

TEST(Factory, NoiselessAcceptanceIsOne) {
    for (bool two : {false, true}) {
        OverheadReport r = factory_overhead("c3628", 0.0, two, 200, 3);
        for (double a : r.acceptance) EXPECT_DOUBLE_EQ(a, 1.0);
        ASSERT_EQ(r.acceptance.size(), two ? 3u : 1u);
        if (!two) EXPECT_DOUBLE_EQ(r.expected_cnots, double(r.cnots_per_attempt));
    }
    OverheadReport one = factory_overhead("c3628", 0.0, false, 10, 3);
    OverheadReport two = factory_overhead("c3628", 0.0, true, 10, 3);
    EXPECT_GT(two.expected_cnots, 0.0);
    EXPECT_GT(one.expected_cnots, 0.0);
}

TEST(Factory, AcceptanceDropsWithNoise) {
    OverheadReport r = factory_overhead("c2026", 4e-3, false, 20000, 5);
    ASSERT_EQ(r.acceptance.size(), 1u);
    EXPECT_LT(r.acceptance[0], 1.0);
    EXPECT_GT(r.acceptance[0], 0.2);
    EXPECT_NEAR(r.expected_cnots, r.cnots_per_attempt / r.acceptance[0], 1e-9);
}

TEST(Factory, LightVerificationIsCheaper) {
    OverheadReport heavy = factory_overhead("c2026", 4e-3, false, 20000, 6, VerifyVariant::Heavy);
    OverheadReport light = factory_overhead("c2026", 4e-3, false, 20000, 6, VerifyVariant::Light);
    EXPECT_LT(light.expected_cnots, heavy.expected_cnots);
}

TEST(Factory, TwoStageIsCheaperForTowers) {
    for (const char *name : {"c3628", "c4848"}) {
        OverheadReport one = factory_overhead(name, 4e-3, false, 20000, 8);
        OverheadReport two = factory_overhead(name, 4e-3, true, 20000, 8);
        EXPECT_LT(two.expected_cnots, 0.85 * one.expected_cnots) << name;
    }
}

TEST(Factory, UnstagedCodeRejectsTwoStage) {
    EXPECT_THROW(factory_overhead("c2026", 1e-3, true, 10, 1), std::invalid_argument);
}

TEST(Spec, KeyValueSections) {
    auto specs = parse_specs(
        "# memory\n"
        "[ec]\n"
        "kind = RepeatedEC\n"
        "code = c2026\n"
        "p = 1e-3, 2e-3\n"
        "shots = 1000\n"
        "\n"
        "[factory]\n"
        "kind = FactoryOverhead\n"
        "code = c3628\n"
        "factory = two-stage\n"
        "variant = light\n");
    ASSERT_EQ(specs.size(), 2u);
    EXPECT_EQ(specs[0].label, "ec");
    EXPECT_EQ(specs[0].kind, ExperimentKind::RepeatedEC);
    ASSERT_EQ(specs[0].p.size(), 2u);
    EXPECT_DOUBLE_EQ(specs[0].p[1], 2e-3);
    EXPECT_EQ(specs[0].shots, 1000u);
    EXPECT_EQ(specs[0].rounds, 10u);
    EXPECT_TRUE(specs[1].two_stage);
    EXPECT_EQ(specs[1].variant, VerifyVariant::Light);
}

TEST(Spec, Json) {
    auto specs = parse_specs(R"([{"kind": "TeleportedCNOT", "code": "c3628", "p": [0.001], "shots": 10, "seed": 4}])");
    ASSERT_EQ(specs.size(), 1u);
    EXPECT_EQ(specs[0].kind, ExperimentKind::TeleportedCNOT);
    EXPECT_EQ(specs[0].seed, 4u);
}

TEST(Spec, Errors) {
    EXPECT_THROW(parse_specs(""), SpecError);
    EXPECT_THROW(parse_specs("kind = Nope\n"), SpecError);
    EXPECT_THROW(parse_specs("code = bogus\n"), SpecError);
    EXPECT_THROW(parse_specs("p = 2\n"), SpecError);
    EXPECT_THROW(parse_specs("shots = 0\n"), SpecError);
    EXPECT_THROW(parse_specs("rounds = 1.5\n"), SpecError);
    EXPECT_THROW(parse_specs("colour = red\n"), SpecError);
    EXPECT_THROW(parse_specs("decoder = correlated\n"), SpecError);
    EXPECT_THROW(parse_specs("{not json"), SpecError);
}

TEST(RunExperiment, CodeCapacityGrid) {
    ExperimentSpec s;
    s.kind = ExperimentKind::CodeCapacity;
    s.code = "c422";
    s.p = {0.01, 0.1};
    s.shots = 5000;
    ExperimentResult r = run_experiment(s, 1);
    ASSERT_EQ(r.rates.size(), 2u);
    EXPECT_LT(r.rates[0].p_R(), r.rates[1].p_R());
}

}  // namespace
}  // namespace iceberg
