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

#include "iceberg/decoder.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <sstream>

#include "iceberg/code_factory.h"

using namespace iceberg;

namespace {

// Independent oracle: for every error e on n <= 14 qubits, scan all errors with
// the same syndrome, keep the minimum-weight ones, and classify e as
// reject / logical / ok. Returns exact p_L (unconditioned) and p_R at p.
struct Exact {
    double p_logical;
    double p_reject;
};

Exact exact_capacity(const StabilizerCode &code, double p) {
    size_t n = code.n;
    auto parity = [](uint64_t a, uint64_t b) { return std::popcount(a & b) & 1; };
    std::vector<uint64_t> hz;
    for (const auto &r : code.hz.rows()) {
        hz.push_back(r.mask());
    }
    std::vector<uint64_t> lz;
    for (const auto &l : code.logical_z) {
        lz.push_back(l.zs.mask());
    }
    auto syn = [&](uint64_t e) {
        uint64_t s = 0;
        for (size_t i = 0; i < hz.size(); i++) {
            s |= uint64_t(parity(e, hz[i])) << i;
        }
        return s;
    };
    auto logical = [&](uint64_t e) {
        uint64_t s = 0;
        for (size_t i = 0; i < lz.size(); i++) {
            s |= uint64_t(parity(e, lz[i])) << i;
        }
        return s;
    };
    uint64_t total = uint64_t{1} << n;
    std::vector<std::vector<uint64_t>> by_syndrome(uint64_t{1} << hz.size());
    for (uint64_t e = 0; e < total; e++) {
        by_syndrome[syn(e)].push_back(e);
    }
    Exact out{0, 0};
    for (const auto &group : by_syndrome) {
        if (group.empty()) {
            continue;
        }
        int best = 99;
        for (uint64_t e : group) {
            best = std::min(best, std::popcount(e));
        }
        std::vector<uint64_t> mins;
        for (uint64_t e : group) {
            if (std::popcount(e) == best) {
                mins.push_back(e);
            }
        }
        bool ambiguous = false;
        for (uint64_t m : mins) {
            ambiguous |= logical(m ^ mins[0]) != 0;
        }
        for (uint64_t e : group) {
            double pr = std::pow(p, std::popcount(e)) * std::pow(1 - p, n - std::popcount(e));
            if (ambiguous) {
                out.p_reject += pr;
            } else if (logical(e ^ mins[0])) {
                out.p_logical += pr;
            }
        }
    }
    return out;
}

}  // namespace

TEST(decoder, c422_table) {
    DecoderTable t = DecoderTable::build(catalog("c422"), PauliType::X);
    EXPECT_EQ(t.decode(0), 0u);
    EXPECT_EQ(t.decode(1), DecoderTable::kReject);
    FaultCountReport r = enumerate_fault_counts(t, 4);
    EXPECT_EQ(r.n_logical[0], 0u);
    EXPECT_EQ(r.n_reject[0], 0u);
    EXPECT_EQ(r.n_reject[1], 4u);
    EXPECT_EQ(r.n_logical[2], 6u);
}

TEST(decoder, zero_syndrome_is_identity_everywhere) {
    for (const auto &e : catalog_entries()) {
        const StabilizerCode &c = catalog(e.name);
        if (!c.is_css() || c.n > 20) {
            continue;
        }
        for (PauliType type : {PauliType::X, PauliType::Z}) {
            DecoderTable t = DecoderTable::build(c, type);
            EXPECT_EQ(t.decode(0), 0u) << e.name;
        }
    }
}

TEST(decoder, c2026_weight_one_and_ambiguous_weight_three) {
    const StabilizerCode &c = catalog("c2026");
    DecoderTable t = DecoderTable::build(c, PauliType::X);
    for (size_t q = 0; q < c.n; q++) {
        EXPECT_EQ(t.decode(t.syndrome(uint64_t{1} << q)), uint64_t{1} << q);
    }
    // Search a pair of weight-3 errors with equal syndrome and a logical difference.
    bool found = false;
    for (uint64_t a = 7; a < (uint64_t{1} << 20) && !found; a++) {
        if (std::popcount(a) != 3) {
            continue;
        }
        uint64_t sa = t.syndrome(a);
        for (uint64_t b = a + 1; b < (uint64_t{1} << 20); b++) {
            if (std::popcount(b) == 3 && t.syndrome(b) == sa && t.logical_flips(a ^ b)) {
                EXPECT_EQ(t.decode(sa), DecoderTable::kReject);
                found = true;
                break;
            }
        }
    }
    EXPECT_TRUE(found);
}

TEST(decoder, corrects_everything_below_half_distance) {
    for (const char *name : {"c1224", "c1644", "c2026", "c3246", "c3628"}) {
        const StabilizerCode &c = catalog(name);
        size_t d = *c.d_known;
        for (PauliType type : {PauliType::X, PauliType::Z}) {
            DecoderTable t = DecoderTable::build(c, type);
            FaultCountReport r = enumerate_fault_counts(t, (d - 1) / 2);
            for (size_t w = 0; w < r.n_logical.size(); w++) {
                EXPECT_EQ(r.n_logical[w], 0u) << name << " w=" << w;
                EXPECT_EQ(r.n_reject[w], 0u) << name << " w=" << w;
            }
        }
    }
}

TEST(decoder, c3628_exact_counts) {
    const StabilizerCode &c = catalog("c3628");
    for (PauliType type : {PauliType::X, PauliType::Z}) {
        FaultCountReport r = enumerate_fault_counts(DecoderTable::build(c, type), 5);
        EXPECT_EQ(r.n_logical[5], 54432u) << to_string(type);
        EXPECT_EQ(r.n_reject[4], 23544u) << to_string(type);
        for (size_t w = 0; w < 4; w++) {
            EXPECT_EQ(r.n_reject[w], 0u);
        }
        for (size_t w = 0; w < 5; w++) {
            EXPECT_EQ(r.n_logical[w], 0u);
        }
    }
}

TEST(decoder, wilson) {
    EXPECT_EQ(wilson_interval(0, 100).low, 0.0);
    EXPECT_EQ(wilson_interval(100, 100).high, 1.0);
    Interval i = wilson_interval(50, 100);
    EXPECT_NEAR(i.high - i.low, 0.1920, 0.005);
    EXPECT_NEAR((i.high + i.low) / 2, 0.5, 1e-12);
    EXPECT_THROW(wilson_interval(1, 0), std::invalid_argument);
}

TEST(decoder, capacity_matches_exhaustive_oracle) {
    for (const char *name : {"c422", "c1224"}) {
        const StabilizerCode &c = catalog(name);
        DecoderTable t = DecoderTable::build(c, PauliType::X);
        for (double p : {0.01, 0.05, 0.1}) {
            Exact ex = exact_capacity(c, p);
            uint64_t shots = 200000;
            RatesReport r = code_capacity_sample(t, p, shots, 1234);
            double pr = ex.p_reject;
            double sr = std::sqrt(pr * (1 - pr) / shots);
            EXPECT_NEAR(r.p_R(), pr, 3 * sr + 1e-12) << name << " p=" << p;
            double pl = ex.p_logical / (1 - pr);
            double sl = std::sqrt(pl * (1 - pl) / r.accepted);
            EXPECT_NEAR(r.p_L(), pl, 3 * sl + 1e-12) << name << " p=" << p;
        }
    }
}

TEST(decoder, capacity_zero_noise_and_determinism) {
    DecoderTable t = DecoderTable::build(catalog("c2026"), PauliType::Z);
    RatesReport z = code_capacity_sample(t, 0.0, 1000, 1);
    EXPECT_EQ(z.p_L(), 0.0);
    EXPECT_EQ(z.p_R(), 0.0);
    RatesReport a = code_capacity_sample(t, 0.03, 300000, 77, 1);
    RatesReport b = code_capacity_sample(t, 0.03, 300000, 77, 3);
    EXPECT_EQ(a.csv_row(), b.csv_row());
    EXPECT_EQ(a.accepted + a.rejected(), a.shots);
}

TEST(decoder, series_rejection_is_monotone) {
    const StabilizerCode &c = catalog("c2026");
    FaultCountReport r = enumerate_fault_counts(DecoderTable::build(c, PauliType::X), 4);
    double prev = 0;
    for (double p = 1e-4; p < 0.02; p *= 1.2) {
        double v = series_reject(r, c.n, p);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(decoder, binary_roundtrip) {
    const StabilizerCode &c = catalog("c1224");
    DecoderTable t = DecoderTable::build(c, PauliType::Z);
    std::stringstream ss;
    t.write_binary(ss);
    DecoderTable back = DecoderTable::read_binary(ss, c);
    for (uint64_t s = 0; s < (uint64_t{1} << t.num_checks()); s++) {
        EXPECT_EQ(back.decode(s), t.decode(s));
    }
    std::stringstream bad;
    t.write_binary(bad);
    EXPECT_THROW(DecoderTable::read_binary(bad, catalog("c2026")), std::invalid_argument);
}
