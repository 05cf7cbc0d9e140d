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

#include <iostream>
#include <numeric>
#include <random>

#include "iceberg/code_factory.h"
#include "iceberg/gadgets.h"
#include "iceberg/tableau.h"

namespace iceberg {
namespace {

const std::vector<std::string> kCatalog = {"c422",  "c642",  "c312q4", "c513",  "c823", "c1224",
                                           "c1644", "c2026", "c3246",  "c3628", "c4848"};
const std::vector<std::string> kCss = {"c422", "c642", "c312q4", "c1224", "c1644", "c2026", "c3246", "c3628", "c4848"};

PauliString embed(const PauliString &p, size_t offset, size_t total) {
    PauliString out(total);
    for (size_t q = 0; q < p.size(); q++) {
        out.xs.set(offset + q, p.xs.get(q));
        out.zs.set(offset + q, p.zs.get(q));
    }
    return out;
}

// Asserts that qubits [offset, offset + n) of `t` hold the code's |0^k> or |+^k>.
void expect_code_state(const Tableau &t, const StabilizerCode &code, size_t offset, Basis basis) {
    size_t total = t.num_qubits();
    for (const auto &r : code.hx.rows()) {
        EXPECT_EQ(t.expectation(embed(PauliString::x_type(r), offset, total)), false) << code.name;
    }
    for (const auto &r : code.hz.rows()) {
        EXPECT_EQ(t.expectation(embed(PauliString::z_type(r), offset, total)), false) << code.name;
    }
    const auto &ls = basis == Basis::Zero ? code.logical_z : code.logical_x;
    for (const auto &l : ls) {
        EXPECT_EQ(t.expectation(embed(l, offset, total)), false) << code.name << " " << to_string(basis);
    }
}


// Wraps a gadget and appends `refs` reference qubits after it.
Circuit with_refs(const Circuit &g, uint32_t refs) {
    Circuit w;
    w.add_register("g", g.num_qubits());
    w.add_register("ref", refs);
    std::vector<uint32_t> id(g.num_qubits());
    std::iota(id.begin(), id.end(), 0);
    w.append(g, id, "");
    return w;
}

// Entangles logical j of the block at `offset` with reference qubit ref + j.
void bell_with_refs(Tableau &t, const StabilizerCode &code, size_t offset, size_t ref, std::mt19937_64 &rng) {
    size_t total = t.num_qubits();
    for (const auto &r : code.hx.rows()) t.measure_pauli(embed(PauliString::x_type(r), offset, total), rng, false);
    for (size_t j = 0; j < code.k; j++) {
        PauliString x = embed(code.logical_x[j], offset, total);
        x.xs.set(ref + j, true);
        t.measure_pauli(x, rng, false);
    }
}

PauliString logical_with_ref(const StabilizerCode &code, bool x_type, size_t j, size_t offset, size_t ref,
                             size_t total) {
    PauliString p = embed(x_type ? code.logical_x[j] : code.logical_z[j], offset, total);
    (x_type ? p.xs : p.zs).set(ref + j, true);
    return p;
}

// Measurement indices of `g` renumbered in the wrapper `w`.
std::vector<uint32_t> remap(const Circuit &g, const Circuit &w, const std::vector<uint32_t> &idx) {
    std::vector<uint32_t> out;
    for (uint32_t m : idx) out.push_back(w.measurement_index(g.measurement_keys()[m]));
    return out;
}

bool parity(const std::vector<bool> &ms, const std::vector<uint32_t> &idx, const BitVec &support) {
    bool v = false;
    for (size_t q : support.set_bits()) v ^= ms[idx[q]];
    return v;
}

TEST(BlockStructure, PresentationsMatchCatalog) {
    for (const char *name : {"c1224", "c1644", "c2026", "c3246", "c3628", "c4848"}) {
        auto bs = block_structure(name);
        ASSERT_TRUE(bs.has_value()) << name;
        EXPECT_EQ(bs->outer.n % catalog(bs->inner).k, 0u);
        EXPECT_EQ(bs->outer.n / catalog(bs->inner).k * catalog(bs->inner).n, catalog(name).n);
    }
    EXPECT_FALSE(block_structure("c422").has_value());
}

TEST(Encoder, SteaneCodeZeroState) {
    StabilizerCode steane = steane_code();
    EncoderRecipe r = synthesize_encoder(steane, Basis::Zero);
    EXPECT_EQ(r.pivots.size(), 3u);
    EXPECT_EQ(r.circuit.num_gates(GateType::CNOT), 9u);
    StabilizerRun run = simulate_stabilizer(r.circuit, 1);
    expect_code_state(run.state, steane, 0, Basis::Zero);
}

TEST(Encoder, CatalogEncodersPrepareCodeStates) {
    for (const auto &name : kCss) {
        for (Basis b : {Basis::Zero, Basis::Plus}) {
            const EncoderRecipe &r = catalog_encoder(name, b);
            StabilizerRun run = simulate_stabilizer(r.circuit, 7);
            EXPECT_FALSE(run.aborted) << name;
            expect_code_state(run.state, catalog(name), r.circuit.reg("q").offset, b);
        }
    }
}

TEST(Automorphism, PermutationRealizesRequestedAction) {
    for (const char *name : {"c422", "c642", "c1224"}) {
        const StabilizerCode &code = catalog(name);
        BitMatrix id = BitMatrix::identity(code.k);
        auto p = permutation_for_x_action(name, id);
        EXPECT_EQ(x_action_of_permutation(code, p), id);
    }
    BitMatrix swap(2, 2);
    swap.set(0, 1, true);
    swap.set(1, 0, true);
    EXPECT_EQ(x_action_of_permutation(catalog("c422"), permutation_for_x_action("c422", swap)), swap);
}


TEST(VerifiedPrep, NoiselessRunAcceptsAndPrepares) {
    for (const auto &name : kCss) {
        for (Basis b : {Basis::Zero, Basis::Plus}) {
            for (VerifyVariant v : {VerifyVariant::Light, VerifyVariant::Heavy}) {
                const PrepRecipe &prep = catalog_prep(name, b, v);
                for (uint64_t seed : {1, 2}) {
                    StabilizerRun run = simulate_stabilizer(prep.circuit, seed);
                    EXPECT_FALSE(run.aborted) << name << " " << to_string(v);
                    expect_code_state(run.state, catalog(name), prep.circuit.reg("out").offset, b);
                }
            }
        }
    }
}

TEST(VerifiedPrep, ShippedPrepsHaveNoBadSingleFaults) {
    for (const char *name : {"c1224", "c1644", "c2026", "c3246", "c3628", "c4848"}) {
        for (Basis b : {Basis::Zero, Basis::Plus}) {
            InjectionReport r = inject_prep_faults(catalog_prep(name, b), false);
            EXPECT_GT(r.single_faults, 0u);
            EXPECT_EQ(r.single_bad, 0u) << name << " " << to_string(b);
        }
    }
}


TEST(VerifiedPrep, SecondOrderFaultsAreCounted) {
    InjectionReport heavy = inject_prep_faults(catalog_prep("c2026", Basis::Zero, VerifyVariant::Heavy), true);
    InjectionReport light = inject_prep_faults(catalog_prep("c2026", Basis::Zero, VerifyVariant::Light), true);
    ASSERT_TRUE(heavy.pairs_done);
    EXPECT_GT(heavy.pair_bad, 0u);
    EXPECT_GT(light.pair_bad, heavy.pair_bad);
    std::cout << "c2026 bad pairs: light " << light.pair_bad << " heavy " << heavy.pair_bad << " of " << heavy.pairs
              << "\n";
}


TEST(EcGadget, TeleportsTheLogicalState) {
    for (const char *name : {"c422", "c1224", "c2026"}) {
        const StabilizerCode &code = catalog(name);
        EcGadget g = steane_ec_gadget(name, VerifyVariant::Heavy);
        uint32_t k = static_cast<uint32_t>(code.k);
        Circuit w = with_refs(g.circuit, k);
        size_t ref = g.circuit.num_qubits();
        size_t data = g.circuit.reg("data").offset;
        size_t out = g.circuit.reg("out").offset;
        for (uint64_t seed = 1; seed <= 4; seed++) {
            std::mt19937_64 rng(seed);
            Tableau init(w.num_qubits());
            bell_with_refs(init, code, data, ref, rng);
            StabilizerRun run = simulate_stabilizer(w, seed, &init);
            ASSERT_FALSE(run.aborted);
            for (size_t j = 0; j < k; j++) {
                bool acc_z = parity(run.measurements, remap(g.circuit, w, g.z_step_measurements), code.logical_x[j].xs);
                bool acc_x = parity(run.measurements, remap(g.circuit, w, g.x_step_measurements), code.logical_z[j].zs);
                size_t total = w.num_qubits();
                EXPECT_EQ(run.state.expectation(logical_with_ref(code, true, j, out, ref, total)), acc_z) << name;
                EXPECT_EQ(run.state.expectation(logical_with_ref(code, false, j, out, ref, total)), acc_x) << name;
            }
        }
    }
}

TEST(TeleportedCnot, ActsAsLogicalCnot) {
    for (const char *name : {"c422", "c1224"}) {
        const StabilizerCode &code = catalog(name);
        TeleportedCnotGadget g = teleported_cnot_gadget(name);
        uint32_t k = static_cast<uint32_t>(code.k);
        Circuit w = with_refs(g.circuit, 2 * k);
        size_t rc = g.circuit.num_qubits(), rt = rc + k, total = w.num_qubits();
        size_t c = g.circuit.reg("c").offset, t = g.circuit.reg("t").offset;
        size_t a = g.circuit.reg("a").offset, b = g.circuit.reg("b").offset;
        for (uint64_t seed = 1; seed <= 4; seed++) {
            std::mt19937_64 rng(seed);
            Tableau init(total);
            bell_with_refs(init, code, c, rc, rng);
            bell_with_refs(init, code, t, rt, rng);
            StabilizerRun run = simulate_stabilizer(w, seed, &init);
            for (size_t j = 0; j < k; j++) {
                bool m1 = parity(run.measurements, remap(g.circuit, w, g.control_measurements), code.logical_z[j].zs);
                bool m2 = parity(run.measurements, remap(g.circuit, w, g.target_measurements), code.logical_x[j].xs);
                // Byproduct X^m1 Z^m2 on logical j of both a and b.
                PauliString xc = logical_with_ref(code, true, j, a, rc, total);
                for (size_t q : code.logical_x[j].xs.set_bits()) xc.xs.flip(b + q);
                PauliString zc = logical_with_ref(code, false, j, a, rc, total);
                PauliString xt = logical_with_ref(code, true, j, b, rt, total);
                PauliString zt = logical_with_ref(code, false, j, b, rt, total);
                for (size_t q : code.logical_z[j].zs.set_bits()) zt.zs.flip(a + q);
                EXPECT_EQ(run.state.expectation(xc), false) << name;
                EXPECT_EQ(run.state.expectation(zc), m1) << name;
                EXPECT_EQ(run.state.expectation(xt), m2) << name;
                EXPECT_EQ(run.state.expectation(zt), false) << name;
            }
        }
    }
}


TEST(TargetedCnot, RealizesSingleLogicalCnot) {
    for (const char *name : {"c422", "c642", "c1224", "c1644"}) {
        const StabilizerCode &code = catalog(name);
        size_t k = code.k;
        for (size_t ctl = 0; ctl < 2 * k; ctl++) {
            for (size_t tgt = 0; tgt < 2 * k; tgt++) {
                if (ctl / k == tgt / k) {
                    EXPECT_THROW(targeted_cnot_schedule(name, ctl, tgt), std::invalid_argument);
                    continue;
                }
                TargetedCnotSchedule s = targeted_cnot_schedule(name, ctl, tgt);
                EXPECT_LE(s.round_perms.size(), 4u);
                Circuit w = s.circuit;
                w.add_register("ref", static_cast<uint32_t>(2 * k));
                size_t n = code.n, ref = 2 * n, total = w.num_qubits();
                std::mt19937_64 rng(3);
                Tableau init(total);
                bell_with_refs(init, code, 0, ref, rng);
                bell_with_refs(init, code, n, ref + k, rng);
                StabilizerRun run = simulate_stabilizer(w, 1, &init);
                for (size_t l = 0; l < 2 * k; l++) {
                    size_t off = l < k ? 0 : n;
                    PauliString x = logical_with_ref(code, true, l % k, off, ref + (l / k) * k, total);
                    PauliString z = logical_with_ref(code, false, l % k, off, ref + (l / k) * k, total);
                    if (l == ctl) {
                        x = pauli_mul(x, embed(code.logical_x[tgt % k], (tgt / k) * n, total));
                    }
                    if (l == tgt) {
                        z = pauli_mul(z, embed(code.logical_z[ctl % k], (ctl / k) * n, total));
                    }
                    EXPECT_EQ(run.state.expectation(x), false) << name << " " << ctl << "->" << tgt;
                    EXPECT_EQ(run.state.expectation(z), false) << name << " " << ctl << "->" << tgt;
                }
            }
        }
    }
}

TEST(DetectGadget, SingleFaultsAreDetectedOrBenign) {
    for (const char *name : {"c422", "c642"}) {
        const StabilizerCode &code = catalog(name);
        Circuit g = iceberg_detect_gadget(name);
        Circuit c;
        c.add_register("all", g.num_qubits());
        c.append(catalog_encoder(name, Basis::Zero).circuit, [&] {
            std::vector<uint32_t> m(code.n);
            std::iota(m.begin(), m.end(), 0);
            return m;
        }(), "enc.");
        std::vector<uint32_t> id(g.num_qubits());
        std::iota(id.begin(), id.end(), 0);
        c.append(g, id, "");
        std::vector<uint32_t> out(code.n);
        std::iota(out.begin(), out.end(), 0);
        CompiledCircuit cc(c, NoiseModel{}, out);
        ResidualWeigher weigher(code, std::nullopt, 1);
        size_t inside = 0;
        for (uint32_t site = 0; site < cc.sites().size(); site++) {
            const FaultSite &fs = cc.sites()[site];
            bool in_gadget = fs.kind == SiteKind::MEASURE || fs.q0 >= code.n || fs.q1 >= code.n;
            if (!in_gadget) continue;
            for (uint8_t ch = 0; ch < fs.choices; ch++) {
                inside++;
                const uint64_t *e = cc.effect(site, ch);
                bool detected = false;
                for (size_t w = 0; w < cc.detector_words(); w++) detected |= e[w] != 0;
                size_t dw = cc.detector_words();
                if (!detected) {
                    EXPECT_LE(weigher.weight(e[dw], e[dw + 1]), 1u) << name << " site " << site;
                }
            }
        }
        EXPECT_GT(inside, 0u);
    }
}


TEST(Automorphism, RealizableActionCounts) {
    for (const char *name : {"c422", "c1224", "c2026", "c3628"}) {
        EXPECT_EQ(realizable_x_actions(name).size(), 6u) << name;
    }
    for (const char *name : {"c1644", "c3246", "c4848"}) {
        EXPECT_EQ(realizable_x_actions(name).size(), 36u) << name;
    }
}

TEST(TargetedCnot, RoundCountsByFamily) {
    for (const char *name : {"c422", "c1224", "c2026", "c3628"}) {
        EXPECT_EQ(targeted_cnot_schedule(name, 0, 3).round_perms.size(), 2u) << name;
    }
    for (const char *name : {"c1644", "c3246", "c4848"}) {
        for (size_t t = 4; t < 8; t++) {
            EXPECT_EQ(targeted_cnot_schedule(name, 1, t).round_perms.size(), 4u) << name;
        }
    }
}

}  // namespace
}  // namespace iceberg
