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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace iceberg {

namespace {

PauliString d_x(const PauliString &p) {
    size_t n = p.size();
    PauliString out(2 * n);
    for (size_t q = 0; q < n; q++) {
        // X -> XI, Z -> IX, Y -> XX.
        out.xs.set(2 * q, p.xs.get(q));
        out.xs.set(2 * q + 1, p.zs.get(q));
    }
    return out;
}

PauliString d_z(const PauliString &p) {
    size_t n = p.size();
    PauliString out(2 * n);
    for (size_t q = 0; q < n; q++) {
        // X -> IZ, Z -> ZI, Y -> ZZ.
        out.zs.set(2 * q, p.zs.get(q));
        out.zs.set(2 * q + 1, p.xs.get(q));
    }
    return out;
}

std::vector<PauliString> rows(std::initializer_list<const char *> texts) {
    std::vector<PauliString> out;
    for (const char *t : texts) {
        out.push_back(PauliString::from_str(t));
    }
    return out;
}

std::vector<std::pair<size_t, size_t>> pair_grouping(size_t n) {
    std::vector<std::pair<size_t, size_t>> g;
    for (size_t i = 0; i + 1 < n; i += 2) {
        g.emplace_back(i, i + 1);
    }
    return g;
}

StabilizerCode finish(StabilizerCode c, size_t d) {
    c.d_known = d;
    validate(c);
    return c;
}

StabilizerCode build_c422() {
    return finish(StabilizerCode::from_generators("c422", rows({"XXXX", "ZZZZ"}), rows({"XXII", "XIXI"}),
                                                  rows({"IZIZ", "IIZZ"})),
                  2);
}

StabilizerCode build_c642() {
    // X_j = X0 X(j+1), Z_j = Z(j+1) Z5 pair up canonically for j = 0..3.
    return finish(StabilizerCode::from_generators("c642", rows({"XXXXXX", "ZZZZZZ"}),
                                                  rows({"XXIIII", "XIXIII", "XIIXII", "XIIIXI"}),
                                                  rows({"IZIIIZ", "IIZIIZ", "IIIZIZ", "IIIIZZ"})),
                  2);
}

StabilizerCode build_c312q4() {
    StabilizerCode c = StabilizerCode::from_generators(
        "c312q4", rows({"XI IX XX", "XX XI IX", "ZI IZ ZZ", "ZZ ZI IZ"}), rows({"XX II XI", "IX II XX"}),
        rows({"ZZ II ZI", "IZ II ZZ"}));
    c.ququad_grouping = pair_grouping(6);
    return finish(std::move(c), 2);
}

StabilizerCode build_c513() {
    return finish(StabilizerCode::from_generators("c513", rows({"XZZXI", "ZYYZI", "IXZZX", "IZYYZ"}),
                                                  rows({"XYXII"}), rows({"ZXZII"})),
                  3);
}

StabilizerCode build_c823() {
    return finish(StabilizerCode::from_generators(
                      "c823", rows({"XXXXIIII", "ZZZZIIII", "IIIIXXXX", "IIIIZZZZ", "IXYZIXYZ", "IZXYIZXY"}),
                      rows({"IIIIIXZY", "IXZYIIII"}), rows({"IIIIIZYX", "IZYXIIII"})),
                  3);
}

StabilizerCode with_name(StabilizerCode c, const std::string &name, size_t d) {
    c.name = name;
    return finish(std::move(c), d);
}

StabilizerCode build(const std::string &name) {
    if (name == "c422") return build_c422();
    if (name == "c642") return build_c642();
    if (name == "c312q4") return build_c312q4();
    if (name == "c513") return build_c513();
    if (name == "c823") return build_c823();
    if (name == "c1224") return with_name(concatenate(catalog("c312q4"), catalog("c422")), name, 4);
    if (name == "c1644") return with_name(concat_iceberg_m2(catalog("c422")), name, 4);
    if (name == "c2026") return with_name(concat_iceberg_m1(catalog("c513")), name, 6);
    if (name == "c3246") return with_name(concat_iceberg_m1(catalog("c823")), name, 6);
    if (name == "c3628") return with_name(concatenate(catalog("c312q4"), catalog("c1224")), name, 8);
    if (name == "c4848") return with_name(concat_iceberg_m2(catalog("c1224")), name, 8);
    throw std::out_of_range("unknown catalog code '" + name + "'");
}

}  // namespace

StabilizerCode map_to_ququad(const StabilizerCode &code) {
    std::vector<PauliString> xs;
    std::vector<PauliString> zs;
    for (const auto &g : code.generators) {
        xs.push_back(d_x(g));
        zs.push_back(d_z(g));
    }
    std::vector<PauliString> gens = xs;
    gens.insert(gens.end(), zs.begin(), zs.end());
    std::vector<PauliString> lx;
    std::vector<PauliString> lz;
    for (size_t j = 0; j < code.k; j++) {
        lx.push_back(d_x(code.logical_x[j]));
        lz.push_back(d_z(code.logical_z[j]));
        lx.push_back(d_x(code.logical_z[j]));
        lz.push_back(d_z(code.logical_x[j]));
    }
    StabilizerCode c;
    if (gens.empty()) {
        c = StabilizerCode::from_css("D(" + code.name + ")", BitMatrix(0, 2 * code.n), BitMatrix(0, 2 * code.n), lx,
                                     lz, code.d_known);
    } else {
        c = StabilizerCode::from_generators("D(" + code.name + ")", gens, lx, lz, code.d_known);
    }
    c.ququad_grouping = pair_grouping(2 * code.n);
    return c;
}

StabilizerCode concatenate(const StabilizerCode &outer, const StabilizerCode &inner, const std::string &name) {
    size_t ki = inner.k;
    if (ki == 0 || outer.n % ki) {
        throw std::invalid_argument("concatenate: outer n must be a multiple of inner k");
    }
    size_t blocks = outer.n / ki;
    size_t ni = inner.n;
    size_t n = blocks * ni;
    auto place = [&](const PauliString &p, size_t b) {
        PauliString out(n);
        for (size_t q = 0; q < ni; q++) {
            out.xs.set(b * ni + q, p.xs.get(q));
            out.zs.set(b * ni + q, p.zs.get(q));
        }
        return out;
    };
    auto substitute = [&](const PauliString &p) {
        PauliString out(n);
        for (size_t q = 0; q < outer.n; q++) {
            size_t b = q / ki;
            size_t l = q % ki;
            if (p.xs.get(q)) {
                out = pauli_mul(out, place(inner.logical_x[l], b));
            }
            if (p.zs.get(q)) {
                out = pauli_mul(out, place(inner.logical_z[l], b));
            }
        }
        out.negative = false;
        return out;
    };
    std::vector<PauliString> gens;
    for (size_t b = 0; b < blocks; b++) {
        for (const auto &g : inner.generators) {
            gens.push_back(place(g, b));
        }
    }
    for (const auto &g : outer.generators) {
        gens.push_back(substitute(g));
    }
    std::vector<PauliString> lx;
    std::vector<PauliString> lz;
    for (size_t j = 0; j < outer.k; j++) {
        lx.push_back(substitute(outer.logical_x[j]));
        lz.push_back(substitute(outer.logical_z[j]));
    }
    std::string nm = name.empty() ? outer.name + "*" + inner.name : name;
    StabilizerCode c = StabilizerCode::from_generators(nm, gens, lx, lz);
    for (auto &l : c.logical_x) {
        l = canonical_representative(c, l);
    }
    for (auto &l : c.logical_z) {
        l = canonical_representative(c, l);
    }
    if (inner.ququad_grouping.size() * 2 == inner.n) {
        for (size_t b = 0; b < blocks; b++) {
            for (auto [x, y] : inner.ququad_grouping) {
                c.ququad_grouping.emplace_back(b * ni + x, b * ni + y);
            }
        }
    }
    return c;
}

StabilizerCode interleave_copies(const StabilizerCode &code) {
    code.require_css("interleave_copies");
    size_t n = code.n;
    auto spread = [n](const PauliString &p, size_t copy) {
        PauliString out(2 * n);
        for (size_t q = 0; q < n; q++) {
            out.xs.set(2 * q + copy, p.xs.get(q));
            out.zs.set(2 * q + copy, p.zs.get(q));
        }
        return out;
    };
    std::vector<PauliString> gens;
    for (size_t copy = 0; copy < 2; copy++) {
        for (const auto &g : code.generators) {
            if (g.xs.any()) {
                gens.push_back(spread(g, copy));
            }
        }
    }
    for (size_t copy = 0; copy < 2; copy++) {
        for (const auto &g : code.generators) {
            if (!g.xs.any()) {
                gens.push_back(spread(g, copy));
            }
        }
    }
    std::vector<PauliString> lx;
    std::vector<PauliString> lz;
    for (size_t j = 0; j < code.k; j++) {
        for (size_t copy = 0; copy < 2; copy++) {
            lx.push_back(spread(code.logical_x[j], copy));
            lz.push_back(spread(code.logical_z[j], copy));
        }
    }
    StabilizerCode c = StabilizerCode::from_generators(code.name + "x2", gens, lx, lz, code.d_known);
    c.ququad_grouping = pair_grouping(2 * n);
    return c;
}

StabilizerCode concat_iceberg_m1(const StabilizerCode &code, const std::string &name) {
    return concatenate(map_to_ququad(code), catalog("c422"), name.empty() ? "m1(" + code.name + ")" : name);
}

StabilizerCode concat_iceberg_m2(const StabilizerCode &outer, const std::string &name) {
    return concatenate(interleave_copies(outer), catalog("c422"), name.empty() ? "m2(" + outer.name + ")" : name);
}

bool has_paired_support(const PauliString &p, const PauliString &q) {
    BitVec sp = p.support();
    return sp == q.support() && sp == pauli_mul(p, q).support();
}

std::optional<PairedSupportPartition> paired_support_partition(const StabilizerCode &code) {
    const auto &g = code.generators;
    if (g.size() % 2) {
        return std::nullopt;
    }
    // Greedy matching over displayed rows, then over rows and pairwise products.
    auto try_match = [](const std::vector<PauliString> &cand, size_t need,
                        const BitMatrix &original) -> std::optional<PairedSupportPartition> {
        std::vector<std::pair<size_t, size_t>> edges;
        for (size_t i = 0; i < cand.size(); i++) {
            for (size_t j = i + 1; j < cand.size(); j++) {
                if (has_paired_support(cand[i], cand[j])) {
                    edges.emplace_back(i, j);
                }
                if (edges.size() > (size_t{1} << 16)) {
                    throw BudgetExceeded("paired_support_partition: more than 2^16 candidate pairs");
                }
            }
        }
        // Depth-first search over edges that keep the chosen rows independent.
        PairedSupportPartition best;
        std::vector<std::pair<size_t, size_t>> chosen;
        std::vector<bool> used(cand.size(), false);
        size_t nodes = 0;
        std::function<bool(size_t, RowSpace &)> dfs = [&](size_t start, RowSpace &span) -> bool {
            if (chosen.size() * 2 == need) {
                return true;
            }
            if (++nodes > (size_t{1} << 16)) {
                return false;
            }
            for (size_t e = start; e < edges.size(); e++) {
                auto [i, j] = edges[e];
                if (used[i] || used[j]) {
                    continue;
                }
                RowSpace next = span;
                if (!next.add(cand[i].symplectic()) || !next.add(cand[j].symplectic())) {
                    continue;
                }
                used[i] = used[j] = true;
                chosen.emplace_back(i, j);
                if (dfs(e + 1, next)) {
                    return true;
                }
                chosen.pop_back();
                used[i] = used[j] = false;
            }
            return false;
        };
        RowSpace span(original.num_cols());
        if (!dfs(0, span)) {
            return std::nullopt;
        }
        for (auto [i, j] : chosen) {
            best.pairs.emplace_back(best.rows.size(), best.rows.size() + 1);
            best.rows.push_back(cand[i]);
            best.rows.push_back(cand[j]);
        }
        return best;
    };
    BitMatrix s = code.symplectic_generators();
    size_t need = rank(s);
    if (need % 2) {
        return std::nullopt;
    }
    if (auto r = try_match(g, need, s)) {
        return r;
    }
    std::vector<PauliString> cand = g;
    for (size_t i = 0; i < g.size(); i++) {
        for (size_t j = i + 1; j < g.size(); j++) {
            PauliString p = pauli_mul(g[i], g[j]);
            p.negative = false;
            cand.push_back(p);
        }
    }
    return try_match(cand, need, s);
}

const std::vector<CatalogEntry> &catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"c422", 4, 2, 2, "[[4,2,2]] Iceberg code, XXXX/ZZZZ"},
        {"c642", 6, 4, 2, "[[6,4,2]] Iceberg code"},
        {"c312q4", 6, 2, 2, "[[3,1,2]]_4 ququad code, qubit presentation"},
        {"c513", 5, 1, 3, "[[5,1,3]] code, displayed cyclic presentation"},
        {"c823", 8, 2, 3, "[[8,2,3]] GF(4)-linear code"},
        {"c1224", 12, 2, 4, "c312q4 concatenated onto c422"},
        {"c1644", 16, 4, 4, "c422 imposed on both logical halves of four c422 blocks"},
        {"c2026", 20, 2, 6, "c513 mapped to ququads, concatenated onto c422"},
        {"c3246", 32, 4, 6, "c823 mapped to ququads, concatenated onto c422"},
        {"c3628", 36, 2, 8, "c312q4 concatenated onto c1224"},
        {"c4848", 48, 4, 8, "c1224 imposed on both logical halves of twelve c422 blocks"},
    };
    return entries;
}

const StabilizerCode &catalog(const std::string &name) {
    static std::recursive_mutex mu;
    static std::map<std::string, std::unique_ptr<StabilizerCode>> cache;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) {
        return *it->second;
    }
    auto code = std::make_unique<StabilizerCode>(build(name));
    const StabilizerCode &ref = *code;
    cache.emplace(name, std::move(code));
    return ref;
}

StabilizerCode steane_code() {
    BitMatrix h = BitMatrix::from_strings({"0001111", "0110011", "1010101"});
    return finish(StabilizerCode::from_css("c713", h, h), 3);
}

}  // namespace iceberg
