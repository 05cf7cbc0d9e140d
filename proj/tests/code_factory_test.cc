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

#include "iceberg/code_factory.h"

#include <gtest/gtest.h>

using namespace iceberg;

namespace {

BitMatrix letters_to_rows(std::initializer_list<const char *> rows) {
    std::vector<std::string> bits;
    for (const char *r : rows) {
        std::string s;
        for (const char *c = r; *c; c++) {
            if (*c == '1' || *c == '.') {
                s.push_back(*c == '1' ? '1' : '0');
            }
        }
        bits.push_back(s);
    }
    return BitMatrix::from_strings(bits);
}

}  // namespace

TEST(code_factory, catalog_parameters) {
    for (const auto &e : catalog_entries()) {
        const StabilizerCode &c = catalog(e.name);
        EXPECT_EQ(c.n, e.n) << e.name;
        EXPECT_EQ(c.k, e.k) << e.name;
        EXPECT_NO_THROW(validate(c)) << e.name;
    }
    EXPECT_THROW(catalog("bogus"), std::out_of_range);
}

TEST(code_factory, ququad_map_first_row) {
    StabilizerCode q = map_to_ququad(catalog("c513"));
    EXPECT_EQ(q.n, 10u);
    EXPECT_TRUE(q.is_css());
    EXPECT_EQ(q.generators[0].str(), "XIIXIXXIII");
    EXPECT_EQ(q.logical_x[0].str(), "XIXXXIIIII");
    EXPECT_EQ(q.logical_z[1].str(), "IZZZIZIIII");
    EXPECT_NO_THROW(validate(q));

    StabilizerCode q8 = map_to_ququad(catalog("c823"));
    EXPECT_EQ(q8.n, 16u);
    EXPECT_EQ(q8.hx.num_rows(), 6u);
    EXPECT_EQ(q8.hz.num_rows(), 6u);
}

TEST(code_factory, c1224_matches_displayed_table) {
    BitMatrix hx = letters_to_rows({"1111 .... ....", ".... 1111 ....", ".... .... 1111", "11.. 1.1. .11.",
                                    ".11. 11.. 1.1."});
    BitMatrix hz = letters_to_rows({"1111 .... ....", ".... 1111 ....", ".... .... 1111", ".1.1 ..11 .11.",
                                    ".11. .1.1 ..11"});
    const StabilizerCode &c = catalog("c1224");
    EXPECT_TRUE(same_rowspace(c.hx, hx));
    EXPECT_TRUE(same_rowspace(c.hz, hz));
}

TEST(code_factory, c2026_support_pattern) {
    BitMatrix h = letters_to_rows({"1111 .... .... .... ....", ".... 1111 .... .... ....",
                                   ".... .... 1111 .... ....", ".... .... .... 1111 ....",
                                   ".... .... .... .... 1111", "11.. 1.1. 1.1. 11.. ....",
                                   "1.1. .11. .11. 1.1. ....", ".... 11.. 1.1. 1.1. 11..",
                                   ".... 1.1. .11. .11. 1.1."});
    const StabilizerCode &c = catalog("c2026");
    EXPECT_TRUE(same_rowspace(c.hx, h));
    EXPECT_TRUE(same_rowspace(c.hz, h));
}

TEST(code_factory, concatenation_methods) {
    EXPECT_TRUE(same_rowspace(concat_iceberg_m1(catalog("c422")).symplectic_generators(),
                              concat_iceberg_m2(catalog("c422")).symplectic_generators()));
    StabilizerCode a = concat_iceberg_m1(catalog("c1224"));
    StabilizerCode b = concat_iceberg_m2(catalog("c1224"));
    EXPECT_EQ(a.n, 48u);
    EXPECT_EQ(b.n, 48u);
    EXPECT_EQ(a.k, 4u);
    EXPECT_FALSE(same_rowspace(a.symplectic_generators(), b.symplectic_generators()));
    EXPECT_TRUE(a.is_self_dual());
}

TEST(code_factory, paired_support) {
    auto p = paired_support_partition(catalog("c513"));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->pairs.size(), 2u);
    for (auto [i, j] : p->pairs) {
        EXPECT_TRUE(has_paired_support(p->rows[i], p->rows[j]));
    }
    EXPECT_TRUE(has_paired_support(PauliString::from_str("XZZXI"), PauliString::from_str("ZYYZI")));
    auto q = paired_support_partition(catalog("c823"));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(q->pairs.size(), 3u);
    StabilizerCode single = StabilizerCode::from_generators("one", {PauliString::from_str("XX")});
    EXPECT_FALSE(paired_support_partition(single).has_value());
}
