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

#include "iceberg/stabilizer_code.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "iceberg/code_factory.h"

using namespace iceberg;

TEST(gf2, steane_row_reduction) {
    SymplecticMatrix m{7, steane_code().hx, {}};
    SymplecticMatrix r = row_reduce(m);
    EXPECT_EQ(r.pivot_columns.size(), 3u);
    EXPECT_EQ(7 - r.pivot_columns.size(), 4u);
    EXPECT_TRUE(std::is_sorted(r.pivot_columns.begin(), r.pivot_columns.end()));
    EXPECT_TRUE(same_rowspace(r.rows, m.rows));

    RowReduction z = row_reduce(BitMatrix(3, 5));
    EXPECT_EQ(z.rank(), 0u);
    RowReduction id = row_reduce(BitMatrix::identity(4));
    EXPECT_EQ(id.reduced, BitMatrix::identity(4));
}

TEST(gf2, nullspace_is_orthogonal) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; t++) {
        BitMatrix m(6, 11);
        for (size_t r = 0; r < 6; r++) {
            for (size_t c = 0; c < 11; c++) {
                m.set(r, c, rng() & 1);
            }
        }
        BitMatrix ns = nullspace(m);
        EXPECT_EQ(ns.num_rows() + rank(m), 11u);
        for (const auto &v : ns.rows()) {
            EXPECT_TRUE(m.multiply(v).none());
        }
    }
}

TEST(stabilizer_code, c422_logicals_match_table) {
    StabilizerCode c = StabilizerCode::from_generators("x", {PauliString::from_str("XXXX"), PauliString::from_str("ZZZZ")});
    ASSERT_EQ(c.k, 2u);
    validate(c);
    // Same cosets as XXII, IZIZ, XIXI, IIZZ up to a symplectic change of basis.
    const StabilizerCode &ref = catalog("c422");
    for (const auto &l : c.logical_x) {
        EXPECT_TRUE(in_normalizer(ref, l));
        EXPECT_FALSE(in_stabilizer_group(ref, l));
        EXPECT_EQ(l.weight(), 2u);
    }
    EXPECT_EQ(ref.logical_x[0].str(), "XXII");
    EXPECT_EQ(ref.logical_z[0].str(), "IZIZ");
    EXPECT_EQ(ref.logical_x[1].str(), "XIXI");
    EXPECT_EQ(ref.logical_z[1].str(), "IIZZ");
}

TEST(stabilizer_code, trivial_one_qubit) {
    StabilizerCode c = StabilizerCode::from_css("t", BitMatrix(0, 1), BitMatrix(0, 1));
    EXPECT_EQ(c.k, 1u);
    EXPECT_EQ(c.logical_x[0].str(), "X");
    EXPECT_EQ(c.logical_z[0].str(), "Z");
}

TEST(stabilizer_code, c513_derived_logicals) {
    const StabilizerCode &c = catalog("c513");
    StabilizerCode bare = StabilizerCode::from_generators("b", c.generators);
    ASSERT_EQ(bare.k, 1u);
    validate(bare);
    // The derived pair spans the same logical cosets as XYX.. / ZXZ..
    PauliString xl = PauliString::from_str("XYXII");
    PauliString zl = PauliString::from_str("ZXZII");
    EXPECT_TRUE(in_normalizer(bare, xl));
    EXPECT_TRUE(in_normalizer(bare, zl));
    EXPECT_FALSE(in_stabilizer_group(bare, xl));
    EXPECT_EQ(brute_force_distance(c), 3u);
    EXPECT_THROW(css_distance(c), NotCssError);
}

TEST(stabilizer_code, catalog_distances) {
    for (const auto &e : catalog_entries()) {
        const StabilizerCode &c = catalog(e.name);
        if (!c.is_css()) {
            EXPECT_EQ(brute_force_distance(c), e.d) << e.name;
            continue;
        }
        auto [dx, dz] = css_distance(c);
        EXPECT_EQ(std::min(dx, dz), e.d) << e.name;
    }
}

TEST(stabilizer_code, distance_budget) {
    EXPECT_THROW(css_distance(catalog("c4848"), 20), BudgetExceeded);
}

TEST(stabilizer_code, permutation_roundtrip_property) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; t++) {
        size_t n = 1 + rng() % 20;
        Permutation perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        PauliString p(n);
        for (size_t q = 0; q < n; q++) {
            p.set_letter(q, "IXYZ"[rng() % 4]);
        }
        EXPECT_EQ(apply_permutation(apply_permutation(p, perm), inverse_permutation(perm)), p);
    }
}

TEST(stabilizer_code, c422_swap_is_logical_swap) {
    const StabilizerCode &c = catalog("c422");
    Permutation swap12{0, 2, 1, 3};
    EXPECT_EQ(apply_permutation(c.logical_x[0], swap12).str(), "XIXI");
    LogicalAction a = logical_action_of_permutation(c, swap12);
    BitMatrix expected(4, 4);
    expected.set(1, 0, true);
    expected.set(0, 1, true);
    expected.set(3, 2, true);
    expected.set(2, 3, true);
    EXPECT_EQ(a.matrix, expected);
    EXPECT_TRUE(a.signs.none());
    Permutation id{0, 1, 2, 3};
    EXPECT_EQ(logical_action_of_permutation(c, id).matrix, BitMatrix::identity(4));
}

TEST(stabilizer_code, non_automorphism_rejected) {
    const StabilizerCode &c = catalog("c1224");
    Permutation perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[0], perm[4]);
    EXPECT_FALSE(is_automorphism(c, perm));
    EXPECT_THROW(logical_action_of_permutation(c, perm), NotAnAutomorphism);
}

TEST(stabilizer_code, logical_actions_are_symplectic) {
    std::mt19937_64 rng(5);
    const StabilizerCode &c = catalog("c422");
    for (int t = 0; t < 24; t++) {
        Permutation perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_TRUE(is_symplectic(logical_action_of_permutation(c, perm).matrix));
    }
}

TEST(stabilizer_code, text_roundtrip) {
    for (const char *name : {"c422", "c513", "c823", "c2026", "c3628"}) {
        const StabilizerCode &c = catalog(name);
        std::string text = to_text(c);
        StabilizerCode back = from_text(text, name);
        EXPECT_EQ(to_text(back), text) << name;
    }
    StabilizerCode mid = from_text("4 2 ?\nXX\xC2\xB7\xC2\xB7\nZZ..\n--\nX1 ..X.\nZ1 ..Z.\nX2 ...X\nZ2 ...Z\n");
    EXPECT_EQ(mid.generators[0].str(), "XXII");
    EXPECT_FALSE(mid.d_known.has_value());
    EXPECT_THROW(from_text("4 2 2\nXXXX\nZZZZ\n--\nX1 XXII\n"), std::invalid_argument);
}
