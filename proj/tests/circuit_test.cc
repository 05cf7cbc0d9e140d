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

#include <complex>
#include <random>

#include "iceberg/circuit.h"
#include "iceberg/frame_sim.h"
#include "iceberg/tableau.h"

namespace iceberg {
namespace {

Circuit ghz_check() {
    Circuit c;
    uint32_t d = c.add_register("d", 3);
    c.add_register("a", 1);
    c.prep_x(d);
    c.prep_z(d + 1);
    c.prep_z(d + 2);
    c.cnot(d, d + 1);
    c.cnot(d + 1, d + 2);
    c.prep_z(3);
    c.cnot(d, 3);
    c.cnot(d + 2, 3);
    uint32_t m = c.measure_z(3, "zz");
    c.abort_if({m});
    return c;
}

TEST(Circuit, GreedyPackingAndTextRoundTrip) {
    Circuit c = ghz_check();
    EXPECT_EQ(c.num_qubits(), 4u);
    // PX 0, PZ 1, PZ 2 and PZ 3 share the first timestep.
    EXPECT_EQ(c.timesteps()[0].size(), 4u);
    std::string text = c.to_text();
    Circuit back = Circuit::from_text(text);
    EXPECT_EQ(back.to_text(), text);
    EXPECT_EQ(back.num_measurements(), 1u);
    EXPECT_EQ(back.num_abort_checks(), 1u);
}

TEST(Circuit, ParserRejectsMalformedInput) {
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nCNOT 0 0\n"), CircuitError);
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nH 0; H 0\n"), CircuitError);
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nMZ 0 a; ABORTIF a\n"), CircuitError);
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nABORTIF b\n"), CircuitError);
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nFOO 1\n"), CircuitError);
    EXPECT_THROW(Circuit::from_text("REG q 0 2\nPERM q 0 0\n"), CircuitError);
    EXPECT_NO_THROW(Circuit::from_text("REG q 0 2\nPERM q 1 0\nMZ 0 a\nABORTIF a\n"));
}

TEST(Circuit, FaultSitesFollowNoiseFlags) {
    Circuit c = ghz_check();
    NoiseModel n;
    n.p = 0.1;
    auto sites = fault_sites(c, n);
    EXPECT_EQ(sites.size(), 5u);  // 4 CNOTs and one measurement
    n.prep = true;
    n.idle = true;
    auto more = fault_sites(c, n);
    EXPECT_GT(more.size(), sites.size() + 4);
}

// Independent dense state-vector oracle for up to 6 qubits.
struct StateVector {
    size_t n;
    std::vector<std::complex<double>> amp;
    explicit StateVector(size_t n_) : n(n_), amp(size_t{1} << n_, 0) { amp[0] = 1; }
    void h(size_t q) {
        double s = 1 / std::sqrt(2.0);
        for (size_t i = 0; i < amp.size(); i++) {
            if (!((i >> q) & 1)) {
                auto a = amp[i], b = amp[i | (size_t{1} << q)];
                amp[i] = s * (a + b);
                amp[i | (size_t{1} << q)] = s * (a - b);
            }
        }
    }
    void cnot(size_t c, size_t t) {
        for (size_t i = 0; i < amp.size(); i++) {
            if (((i >> c) & 1) && !((i >> t) & 1)) {
                std::swap(amp[i], amp[i | (size_t{1} << t)]);
            }
        }
    }
    void x(size_t q) {
        for (size_t i = 0; i < amp.size(); i++) {
            if (!((i >> q) & 1)) {
                std::swap(amp[i], amp[i | (size_t{1} << q)]);
            }
        }
    }
    void z(size_t q) {
        for (size_t i = 0; i < amp.size(); i++) {
            if ((i >> q) & 1) {
                amp[i] = -amp[i];
            }
        }
    }
    double expectation(const PauliString &p) const {
        std::complex<double> acc = 0;
        for (size_t i = 0; i < amp.size(); i++) {
            size_t j = i;
            std::complex<double> ph = 1;
            for (size_t q = 0; q < n; q++) {
                bool b = (i >> q) & 1;
                char l = p.letter(q);
                if (l == 'X' || l == 'Y') {
                    j ^= size_t{1} << q;
                }
                if (l == 'Z' && b) {
                    ph = -ph;
                }
                if (l == 'Y') {
                    ph *= b ? std::complex<double>(0, -1) : std::complex<double>(0, 1);
                }
            }
            acc += std::conj(amp[j]) * ph * amp[i];
        }
        return (p.negative ? -1.0 : 1.0) * acc.real();
    }
};

TEST(Tableau, MatchesStateVectorOnRandomCircuits) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; trial++) {
        size_t n = 2 + rng() % 4;
        Tableau t(n);
        StateVector sv(n);
        for (int g = 0; g < 30; g++) {
            size_t a = rng() % n, b = rng() % n;
            switch (rng() % 4) {
                case 0:
                    t.h(a);
                    sv.h(a);
                    break;
                case 1:
                    if (a != b) {
                        t.cnot(a, b);
                        sv.cnot(a, b);
                    }
                    break;
                case 2:
                    t.x(a);
                    sv.x(a);
                    break;
                default:
                    t.z(a);
                    sv.z(a);
            }
        }
        for (int probe = 0; probe < 30; probe++) {
            PauliString p(n);
            for (size_t q = 0; q < n; q++) {
                p.set_letter(q, "IXYZ"[rng() % 4]);
            }
            double e = sv.expectation(p);
            auto det = t.expectation(p);
            if (det) {
                EXPECT_NEAR(e, *det ? -1.0 : 1.0, 1e-9);
            } else {
                EXPECT_NEAR(e, 0.0, 1e-9);
            }
        }
    }
}

TEST(Tableau, GhzParityCheckNeverAborts) {
    Circuit c = ghz_check();
    for (uint64_t seed = 0; seed < 20; seed++) {
        StabilizerRun r = simulate_stabilizer(c, seed);
        EXPECT_FALSE(r.aborted);
        EXPECT_FALSE(r.measurements[0]);
        EXPECT_EQ(r.state.expectation(PauliString::from_str("XXXI")), std::optional<bool>(false));
    }
}

TEST(Tableau, PauliMeasurementForcedOutcome) {
    Tableau t(2);
    std::mt19937_64 rng(1);
    EXPECT_TRUE(t.measure_pauli(PauliString::from_str("XX"), rng, true));
    EXPECT_EQ(t.expectation(PauliString::from_str("XX")), std::optional<bool>(true));
    EXPECT_EQ(t.expectation(PauliString::from_str("-XX")), std::optional<bool>(false));
    EXPECT_EQ(t.expectation(PauliString::from_str("ZZ")), std::optional<bool>(false));
    EXPECT_FALSE(t.expectation(PauliString::from_str("ZI")).has_value());
}

TEST(FrameSim, NoiselessBatchIsClean) {
    Circuit c = ghz_check();
    NoiseModel n;
    FrameBatch b = sample_frames(c, n, 1000, 3);
    for (uint64_t w : b.aborted) EXPECT_EQ(w, 0u);
    for (uint64_t w : b.x) EXPECT_EQ(w, 0u);
}

TEST(FrameSim, RecordsReplayToTheSameShot) {
    Circuit c = ghz_check();
    NoiseModel n;
    n.p = 0.2;
    n.prep = true;
    n.idle = true;
    FrameBatch b = sample_frames(c, n, 300, 11, true);
    for (size_t s = 0; s < b.shots; s++) {
        FrameBatch r = replay_faults(c, n, b.records[s]);
        EXPECT_EQ(r.is_aborted(0), b.is_aborted(s));
        for (size_t q = 0; q < c.num_qubits(); q++) {
            EXPECT_EQ(r.x_bit(q, 0), b.x_bit(q, s));
            EXPECT_EQ(r.z_bit(q, 0), b.z_bit(q, s));
        }
    }
}

TEST(FrameSim, CompiledEffectsAreLinear) {
    Circuit c = ghz_check();
    NoiseModel n;
    n.p = 0.1;
    CompiledCircuit cc(c, n, {0, 1, 2});
    SparseSampler sampler(cc, 0.1);
    std::mt19937_64 rng(5);
    auto sites = cc.sites();
    for (int trial = 0; trial < 200; trial++) {
        FaultRecord f;
        for (uint32_t s = 0; s < sites.size(); s++) {
            if (rng() % 3 == 0) {
                f.push_back({s, uniform_choice(rng, sites[s].choices)});
            }
        }
        Attempt a = sampler.evaluate(f);
        // Without aborts the replay must agree bit for bit; with an abort the
        // detector parity must be odd in both.
        FrameBatch r = replay_faults(c, n, f);
        EXPECT_EQ(a.accepted, !r.is_aborted(0));
        if (a.accepted) {
            for (uint32_t q = 0; q < 3; q++) {
                EXPECT_EQ(bool((a.x >> q) & 1), r.x_bit(q, 0));
                EXPECT_EQ(bool((a.z >> q) & 1), r.z_bit(q, 0));
            }
        }
    }
}

TEST(FrameSim, SparseAcceptanceMatchesBatch) {
    Circuit c = ghz_check();
    NoiseModel n;
    n.p = 0.05;
    CompiledCircuit cc(c, n, {0, 1, 2});
    SparseSampler sampler(cc, n.p);
    std::mt19937_64 rng(9);
    size_t shots = 200000, acc = 0;
    for (size_t i = 0; i < shots; i++) {
        acc += sampler.attempt(rng).accepted;
    }
    FrameBatch b = sample_frames(c, n, shots, 10);
    size_t acc_b = 0;
    for (size_t s = 0; s < shots; s++) {
        acc_b += !b.is_aborted(s);
    }
    double pa = double(acc) / shots, pb = double(acc_b) / shots;
    double sigma = std::sqrt(pa * (1 - pa) / shots * 2);
    EXPECT_NEAR(pa, pb, 5 * sigma);
}

}  // namespace
}  // namespace iceberg
