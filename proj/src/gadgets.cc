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

#include "iceberg/gadgets.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "iceberg/code_factory.h"
#include "iceberg/parallel.h"

namespace iceberg {

const char *to_string(Basis b) { return b == Basis::Zero ? "zero" : "plus"; }

const char *to_string(VerifyVariant v) {
    switch (v) {
        case VerifyVariant::None:
            return "none";
        case VerifyVariant::Light:
            return "light";
        case VerifyVariant::Heavy:
            return "heavy";
    }
    return "?";
}

namespace {

using Perm = std::vector<uint32_t>;

std::recursive_mutex &cache_mutex() {
    static std::recursive_mutex mu;
    return mu;
}

// --- small GF(2) matrices (k <= 8) ----------------------------------------

BitMatrix mat_mul(const BitMatrix &a, const BitMatrix &b) { return a.multiply(b); }

BitMatrix mat_add(BitMatrix a, const BitMatrix &b) {
    for (size_t r = 0; r < a.num_rows(); r++) {
        a.row(r) ^= b.row(r);
    }
    return a;
}

bool mat_zero(const BitMatrix &a) {
    for (const auto &r : a.rows()) {
        if (r.any()) {
            return false;
        }
    }
    return true;
}

std::optional<BitMatrix> mat_inverse(const BitMatrix &a) {
    size_t k = a.num_rows();
    BitMatrix m = a;
    BitMatrix inv = BitMatrix::identity(k);
    for (size_t c = 0; c < k; c++) {
        size_t p = k;
        for (size_t r = c; r < k; r++) {
            if (m.get(r, c)) {
                p = r;
                break;
            }
        }
        if (p == k) {
            return std::nullopt;
        }
        std::swap(m.row(c), m.row(p));
        std::swap(inv.row(c), inv.row(p));
        for (size_t r = 0; r < k; r++) {
            if (r != c && m.get(r, c)) {
                m.row(r) ^= m.row(c);
                inv.row(r) ^= inv.row(c);
            }
        }
    }
    return inv;
}

std::string mat_key(const BitMatrix &a) { return a.str(); }

BitVec x_part(const PauliString &p) { return p.xs; }
BitVec z_part(const PauliString &p) { return p.zs; }

std::vector<BitVec> logical_x_rows(const StabilizerCode &c) {
    std::vector<BitVec> v;
    for (const auto &l : c.logical_x) v.push_back(x_part(l));
    return v;
}
std::vector<BitVec> logical_z_rows(const StabilizerCode &c) {
    std::vector<BitVec> v;
    for (const auto &l : c.logical_z) v.push_back(z_part(l));
    return v;
}

}  // namespace

// --- block structures -----------------------------------------------------

std::optional<BlockStructure> block_structure(const std::string &name) {
    static std::map<std::string, std::optional<BlockStructure>> cache;
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    auto it = cache.find(name);
    if (it != cache.end()) {
        return it->second;
    }
    std::optional<BlockStructure> s;
    if (name == "c1224") {
        s = BlockStructure{catalog("c312q4"), "c422"};
    } else if (name == "c1644") {
        s = BlockStructure{interleave_copies(catalog("c422")), "c422"};
    } else if (name == "c2026") {
        s = BlockStructure{map_to_ququad(catalog("c513")), "c422"};
    } else if (name == "c3246") {
        s = BlockStructure{map_to_ququad(catalog("c823")), "c422"};
    } else if (name == "c3628") {
        s = BlockStructure{catalog("c312q4"), "c1224"};
    } else if (name == "c4848") {
        s = BlockStructure{interleave_copies(catalog("c312q4")), "c1644"};
    }
    if (s) {
        // The presentation must describe exactly the catalog code.
        const StabilizerCode &cat = catalog(name);
        StabilizerCode pres = concatenate(s->outer, catalog(s->inner));
        bool ok = same_rowspace(pres.hx, cat.hx) && same_rowspace(pres.hz, cat.hz) && pres.k == cat.k;
        RowSpace sx(cat.hx), sz(cat.hz);
        for (size_t j = 0; ok && j < cat.k; j++) {
            ok = sx.contains(pres.logical_x[j].xs ^ cat.logical_x[j].xs) &&
                 sz.contains(pres.logical_z[j].zs ^ cat.logical_z[j].zs);
        }
        if (!ok) {
            throw SynthesisError("block structure of " + name + " does not match the catalog code");
        }
    }
    cache[name] = s;
    return s;
}

// --- plain Steane encoder -------------------------------------------------

EncoderRecipe synthesize_encoder(const StabilizerCode &code, Basis basis) {
    code.require_css("synthesize_encoder");
    BitMatrix rows = code.hx;
    if (basis == Basis::Plus) {
        for (const auto &l : logical_x_rows(code)) {
            rows.push_row(l);
        }
    }
    RowReduction rr = row_reduce(rows);
    if (rr.rank() != rows.num_rows()) {
        throw SynthesisError("synthesize_encoder: dependent X rows");
    }
    EncoderRecipe r;
    r.code = code.name;
    r.basis = basis;
    r.block_mode = false;
    uint32_t n = static_cast<uint32_t>(code.n);
    r.circuit.add_register("q", n);
    r.circuit.add_register("aux", 0);
    std::vector<bool> is_pivot(n, false);
    for (size_t c : rr.pivot_columns) {
        is_pivot[c] = true;
        r.pivots.push_back(static_cast<uint32_t>(c));
    }
    for (uint32_t q = 0; q < n; q++) {
        if (is_pivot[q]) {
            r.circuit.prep_x(q);
        } else {
            r.circuit.prep_z(q);
        }
    }
    for (size_t i = 0; i < rr.rank(); i++) {
        uint32_t piv = static_cast<uint32_t>(rr.pivot_columns[i]);
        for (size_t c : rr.reduced.row(i).set_bits()) {
            if (c != piv) {
                r.circuit.cnot(piv, static_cast<uint32_t>(c));
            }
        }
    }
    return r;
}

// --- permutation automorphisms -------------------------------------------

BitMatrix x_action_of_permutation(const StabilizerCode &code, const std::vector<uint32_t> &perm) {
    code.require_css("x_action_of_permutation");
    std::vector<size_t> p(perm.begin(), perm.end());
    RowSpace sx(code.hx), sz(code.hz);
    for (const auto &r : code.hx.rows()) {
        if (!sx.contains(apply_permutation(r, p))) {
            throw NotAnAutomorphism("x_action_of_permutation: X checks not preserved");
        }
    }
    for (const auto &r : code.hz.rows()) {
        if (!sz.contains(apply_permutation(r, p))) {
            throw NotAnAutomorphism("x_action_of_permutation: Z checks not preserved");
        }
    }
    size_t k = code.k;
    BitMatrix basis(0, code.n);
    for (const auto &l : logical_x_rows(code)) basis.push_row(l);
    for (const auto &r : code.hx.rows()) basis.push_row(r);
    BitMatrix action(k, k);
    for (size_t l = 0; l < k; l++) {
        auto coeffs = solve_row_combination(basis, apply_permutation(code.logical_x[l].xs, p));
        if (!coeffs) {
            throw NotAnAutomorphism("x_action_of_permutation: logical not preserved");
        }
        for (size_t m = 0; m < k; m++) {
            action.set(l, m, coeffs->get(m));
        }
    }
    return action;
}

namespace {

bool is_css_automorphism(const StabilizerCode &code, const RowSpace &sx, const RowSpace &sz, const Perm &perm) {
    std::vector<size_t> p(perm.begin(), perm.end());
    for (const auto &r : code.hx.rows()) {
        if (!sx.contains(apply_permutation(r, p))) return false;
    }
    for (const auto &r : code.hz.rows()) {
        if (!sz.contains(apply_permutation(r, p))) return false;
    }
    return true;
}

std::vector<Perm> all_permutations(uint32_t n) {
    std::vector<Perm> out;
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Realizable logical X actions of a code, discovered tier by tier.
struct ActionTable {
    std::map<std::string, Perm> by_action;
    std::vector<BitMatrix> actions;
    int tiers_done = 0;
    bool exhausted = false;
};

std::vector<Perm> automorphisms(const std::string &name);

const std::vector<BitMatrix> &realizable_actions(const std::string &name, bool full);

uint32_t mat_bits(const BitMatrix &m) {
    uint32_t v = 0;
    for (size_t l = 0; l < m.num_rows(); l++) {
        for (size_t c = 0; c < m.num_cols(); c++) {
            if (m.get(l, c)) v |= 1u << (l * m.num_cols() + c);
        }
    }
    return v;
}

// For each block permutation beta, the block-diagonal inner actions M_b that
// keep the outer code invariant form the kernel of a linear system in the
// entries of the M_b. Kernel elements whose blocks are all realizable give
// candidate permutations.
std::vector<Perm> linear_candidates(const std::string &name, const BlockStructure &bs,
                                    const std::vector<Perm> &block_perms) {
    const StabilizerCode &outer = bs.outer;
    const StabilizerCode &inner = catalog(bs.inner);
    uint32_t k = static_cast<uint32_t>(inner.k);
    uint32_t ni = static_cast<uint32_t>(inner.n);
    uint32_t nb = static_cast<uint32_t>(outer.n / k);
    uint32_t kk = k * k;
    size_t unknowns = size_t(nb) * kk;
    if (kk > 16) return {};

    std::vector<char> realizable(size_t{1} << kk, 0);
    for (const auto &a : realizable_actions(bs.inner, true)) realizable[mat_bits(a)] = 1;
    std::map<uint32_t, Perm> inner_perm;

    BitMatrix hx_dual = nullspace(outer.hx);
    BitMatrix hz_dual = nullspace(outer.hz);
    std::vector<Perm> out;
    for (const auto &beta : block_perms) {
        BitMatrix eqs(0, unknowns);
        // X rows r: h . L(r) = 0 for every h orthogonal to the X checks.
        for (const auto &r : outer.hx.rows()) {
            for (const auto &h : hx_dual.rows()) {
                BitVec e(unknowns);
                for (uint32_t b = 0; b < nb; b++)
                    for (uint32_t l = 0; l < k; l++)
                        if (r.get(b * k + l))
                            for (uint32_t m = 0; m < k; m++)
                                if (h.get(beta[b] * k + m)) e.flip(b * kk + l * k + m);
                eqs.push_row(std::move(e));
            }
        }
        // Z rows transform by the transpose in the other direction.
        for (const auto &s : outer.hz.rows()) {
            for (const auto &g : hz_dual.rows()) {
                BitVec e(unknowns);
                for (uint32_t b = 0; b < nb; b++)
                    for (uint32_t l = 0; l < k; l++)
                        if (g.get(b * k + l))
                            for (uint32_t m = 0; m < k; m++)
                                if (s.get(beta[b] * k + m)) e.flip(b * kk + l * k + m);
                eqs.push_row(std::move(e));
            }
        }
        BitMatrix ker = nullspace(eqs);
        size_t dim = ker.num_rows();
        if (dim == 0 || dim > 20) continue;
        std::vector<uint32_t> blocks(nb);
        for (uint64_t combo = 1; combo < (uint64_t{1} << dim); combo++) {
            BitVec u(unknowns);
            for (size_t i = 0; i < dim; i++)
                if ((combo >> i) & 1) u ^= ker.row(i);
            bool ok = true;
            for (uint32_t b = 0; b < nb && ok; b++) {
                uint32_t v = 0;
                for (uint32_t i = 0; i < kk; i++)
                    if (u.get(b * kk + i)) v |= 1u << i;
                blocks[b] = v;
                ok = realizable[v];
            }
            if (!ok) continue;
            Perm p(size_t(nb) * ni);
            for (uint32_t b = 0; b < nb; b++) {
                auto it = inner_perm.find(blocks[b]);
                if (it == inner_perm.end()) {
                    BitMatrix m(k, k);
                    for (uint32_t i = 0; i < kk; i++) m.set(i / k, i % k, (blocks[b] >> i) & 1);
                    it = inner_perm.emplace(blocks[b], permutation_for_x_action(bs.inner, m)).first;
                }
                for (uint32_t q = 0; q < ni; q++) p[b * ni + q] = beta[b] * ni + it->second[q];
            }
            out.push_back(std::move(p));
            if (out.size() > 200000) return out;
        }
    }
    return out;
}

// Candidate permutations of tier t (0: cheap family, 1: larger family).
std::vector<Perm> candidates(const std::string &name, int tier) {
    const StabilizerCode &code = catalog(name);
    uint32_t n = static_cast<uint32_t>(code.n);
    auto bs = block_structure(name);
    if (!bs) {
        if (tier == 0 && n <= 8) {
            return all_permutations(n);
        }
        return {};
    }
    const StabilizerCode &inner = catalog(bs->inner);
    uint32_t ni = static_cast<uint32_t>(inner.n);
    uint32_t nb = n / ni;
    std::vector<Perm> inner_auts = automorphisms(bs->inner);
    std::vector<Perm> block_perms = all_permutations(nb);
    std::vector<Perm> out;
    auto compose = [&](const Perm &beta, const std::vector<const Perm *> &sig) {
        Perm p(n);
        for (uint32_t b = 0; b < nb; b++) {
            for (uint32_t q = 0; q < ni; q++) {
                p[b * ni + q] = beta[b] * ni + (*sig[b])[q];
            }
        }
        return p;
    };
    if (tier == 0) {
        for (const auto &beta : block_perms) {
            for (const auto &s : inner_auts) {
                out.push_back(compose(beta, std::vector<const Perm *>(nb, &s)));
            }
        }
    } else if (tier == 1) {
        out = linear_candidates(name, *bs, block_perms);
    }
    return out;
}

ActionTable &action_table(const std::string &name) {
    static std::map<std::string, std::unique_ptr<ActionTable>> tables;
    auto &t = tables[name];
    if (!t) {
        t = std::make_unique<ActionTable>();
    }
    return *t;
}

// Expands the table by one tier; returns false when nothing is left.
bool expand(const std::string &name, ActionTable &t) {
    if (t.exhausted) {
        return false;
    }
    const StabilizerCode &code = catalog(name);
    RowSpace sx(code.hx), sz(code.hz);
    std::vector<Perm> cands = candidates(name, t.tiers_done);
    t.tiers_done++;
    if (cands.empty() && t.tiers_done > 1) {
        t.exhausted = true;
        return false;
    }
    for (const auto &p : cands) {
        if (!is_css_automorphism(code, sx, sz, p)) {
            continue;
        }
        BitMatrix a = x_action_of_permutation(code, p);
        auto key = mat_key(a);
        if (!t.by_action.count(key)) {
            t.by_action.emplace(key, p);
            t.actions.push_back(a);
        }
    }
    if (t.tiers_done >= 2) {
        t.exhausted = true;
    }
    return true;
}

// Automorphisms used as building blocks when the code is itself an inner code.
std::vector<Perm> automorphisms(const std::string &name) {
    static std::map<std::string, std::vector<Perm>> cache;
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    auto it = cache.find(name);
    if (it != cache.end()) {
        return it->second;
    }
    const StabilizerCode &code = catalog(name);
    RowSpace sx(code.hx), sz(code.hz);
    std::vector<Perm> out;
    for (const auto &p : candidates(name, 0)) {
        if (is_css_automorphism(code, sx, sz, p)) {
            out.push_back(p);
        }
    }
    cache[name] = out;
    return out;
}

const std::vector<BitMatrix> &realizable_actions(const std::string &name, bool full) {
    ActionTable &t = action_table(name);
    if (t.tiers_done == 0) {
        expand(name, t);
    }
    while (full && !t.exhausted) {
        expand(name, t);
    }
    return t.actions;
}

}  // namespace

std::vector<BitMatrix> realizable_x_actions(const std::string &name) {
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    return realizable_actions(name, true);
}

std::vector<uint32_t> permutation_for_x_action(const std::string &name, const BitMatrix &action) {
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    ActionTable &t = action_table(name);
    auto key = mat_key(action);
    for (;;) {
        auto it = t.by_action.find(key);
        if (it != t.by_action.end()) {
            return it->second;
        }
        if (!expand(name, t)) {
            throw SynthesisError("no automorphism of " + name + " realizes logical action\n" + action.str());
        }
    }
}

// --- block encoder --------------------------------------------------------

bool is_tower(const std::string &name) { return name == "c3628" || name == "c4848"; }

namespace {

// Circuit that prepares one inner block; output on register "q" or "out".
const Circuit &inner_circuit(const std::string &inner, Basis basis, bool verified) {
    return verified ? catalog_prep(inner, basis, VerifyVariant::Heavy).circuit
                    : catalog_encoder(inner, basis).circuit;
}

const Register &output_register(const Circuit &c) {
    for (const auto &r : c.registers()) {
        if (r.name == "q" || r.name == "out") {
            return r;
        }
    }
    throw SynthesisError("inner circuit has no output register");
}

}  // namespace

EncoderRecipe synthesize_block_encoder(const std::string &name, Basis basis, bool verified_inner) {
    auto bs = block_structure(name);
    if (!bs) {
        throw SynthesisError(name + " has no block structure");
    }
    const StabilizerCode &outer = bs->outer;
    const StabilizerCode &inner = catalog(bs->inner);
    size_t k = inner.k;
    size_t ni = inner.n;
    if (outer.n % k != 0) {
        throw SynthesisError("outer length not a multiple of inner k");
    }
    size_t nb = outer.n / k;

    std::vector<BitVec> rows = outer.hx.rows();
    if (basis == Basis::Plus) {
        for (const auto &l : logical_x_rows(outer)) rows.push_back(l);
    }
    if (rows.size() % k != 0) {
        throw SynthesisError("X rows of " + name + " do not group into inner-sized tuples");
    }
    size_t nt = rows.size() / k;
    // A[i][b] is the k x k block of tuple i on inner block b.
    std::vector<std::vector<BitMatrix>> A(nt, std::vector<BitMatrix>(nb, BitMatrix(k, k)));
    for (size_t i = 0; i < nt; i++) {
        for (size_t b = 0; b < nb; b++) {
            for (size_t l = 0; l < k; l++) {
                for (size_t m = 0; m < k; m++) {
                    A[i][b].set(l, m, rows[i * k + l].get(b * k + m));
                }
            }
        }
    }
    std::vector<size_t> pivot(nt);
    std::vector<bool> used(nb, false);
    for (size_t i = 0; i < nt; i++) {
        size_t p = nb;
        std::optional<BitMatrix> inv;
        for (size_t b = 0; b < nb && p == nb; b++) {
            if (!used[b] && (inv = mat_inverse(A[i][b]))) {
                p = b;
            }
        }
        if (p == nb) {
            throw SynthesisError("block elimination of " + name + " found no invertible pivot");
        }
        used[p] = true;
        pivot[i] = p;
        for (size_t b = 0; b < nb; b++) {
            A[i][b] = mat_mul(*inv, A[i][b]);
        }
        for (size_t j = 0; j < nt; j++) {
            if (j == i || mat_zero(A[j][p])) continue;
            BitMatrix f = A[j][p];
            for (size_t b = 0; b < nb; b++) {
                A[j][b] = mat_add(A[j][b], mat_mul(f, A[i][b]));
            }
        }
    }

    EncoderRecipe r;
    r.code = name;
    r.basis = basis;
    r.block_mode = true;
    std::vector<bool> is_pivot(nb, false);
    for (size_t p : pivot) {
        is_pivot[p] = true;
        r.pivots.push_back(static_cast<uint32_t>(p));
    }
    uint32_t aux_total = 0;
    for (size_t b = 0; b < nb; b++) {
        const Circuit &c = inner_circuit(bs->inner, is_pivot[b] ? Basis::Plus : Basis::Zero, verified_inner);
        aux_total += c.num_qubits() - static_cast<uint32_t>(ni);
    }
    r.circuit.add_register("q", static_cast<uint32_t>(nb * ni));
    uint32_t aux_off = r.circuit.add_register("aux", aux_total);
    for (size_t b = 0; b < nb; b++) {
        const Circuit &c = inner_circuit(bs->inner, is_pivot[b] ? Basis::Plus : Basis::Zero, verified_inner);
        const Register &out = output_register(c);
        std::vector<uint32_t> map(c.num_qubits());
        for (uint32_t q = 0; q < c.num_qubits(); q++) {
            if (q >= out.offset && q < out.offset + out.size) {
                map[q] = static_cast<uint32_t>(b * ni) + (q - out.offset);
            } else {
                map[q] = aux_off++;
            }
        }
        r.circuit.append(c, map, "b" + std::to_string(b) + ".");
    }
    for (size_t i = 0; i < nt; i++) {
        size_t p = pivot[i];
        for (size_t c = 0; c < nb; c++) {
            if (c == p || mat_zero(A[i][c])) continue;
            if (!mat_inverse(A[i][c])) {
                throw SynthesisError("block elimination of " + name + " left a singular off-pivot entry");
            }
            Perm pi = permutation_for_x_action(bs->inner, A[i][c]);
            for (uint32_t q = 0; q < ni; q++) {
                r.circuit.cnot(static_cast<uint32_t>(p * ni + q), static_cast<uint32_t>(c * ni + pi[q]));
            }
            r.rounds.push_back(BlockRound{static_cast<uint32_t>(p), static_cast<uint32_t>(c), pi});
        }
    }
    return r;
}

const EncoderRecipe &catalog_encoder(const std::string &name, Basis basis) {
    static std::map<std::pair<std::string, Basis>, std::unique_ptr<EncoderRecipe>> cache;
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    auto &slot = cache[{name, basis}];
    if (!slot) {
        if (block_structure(name)) {
            slot = std::make_unique<EncoderRecipe>(synthesize_block_encoder(name, basis, is_tower(name)));
        } else {
            slot = std::make_unique<EncoderRecipe>(synthesize_encoder(catalog(name), basis));
        }
    }
    return *slot;
}

// --- verification ---------------------------------------------------------

namespace {

struct PrepBuilder {
    const StabilizerCode &code;
    Basis basis;
    Circuit &circ;
    std::vector<uint32_t> block_offset;  // first qubit of each code block
    uint32_t n;

    std::vector<uint32_t> measure_block(uint32_t blk, bool x_basis, const std::string &tag) {
        std::vector<uint32_t> ms;
        for (uint32_t q = 0; q < n; q++) {
            std::string key = tag + std::to_string(q);
            ms.push_back(x_basis ? circ.measure_x(block_offset[blk] + q, key) : circ.measure_z(block_offset[blk] + q, key));
        }
        return ms;
    }

    void checks_on(const std::vector<uint32_t> &ms, const std::vector<BitVec> &supports) {
        for (const auto &s : supports) {
            std::vector<uint32_t> sel;
            for (size_t q : s.set_bits()) sel.push_back(ms[q]);
            circ.abort_if(sel);
        }
    }

    void transversal(uint32_t from, uint32_t to) {
        for (uint32_t q = 0; q < n; q++) {
            circ.cnot(block_offset[from] + q, block_offset[to] + q);
        }
    }

    // Copies the errors that flip the prepared logicals from a into b.
    void compare(uint32_t a, uint32_t b, const std::string &tag) {
        std::vector<BitVec> sup;
        if (basis == Basis::Zero) {
            transversal(a, b);
            sup = code.hz.rows();
            for (const auto &l : logical_z_rows(code)) sup.push_back(l);
            checks_on(measure_block(b, false, tag), sup);
        } else {
            transversal(b, a);
            sup = code.hx.rows();
            for (const auto &l : logical_x_rows(code)) sup.push_back(l);
            checks_on(measure_block(b, true, tag), sup);
        }
    }

    // Copies the other error type from a into c; only checks are compared.
    void cross(uint32_t a, uint32_t c, const std::string &tag) {
        if (basis == Basis::Zero) {
            transversal(c, a);
            checks_on(measure_block(c, true, tag), code.hx.rows());
        } else {
            transversal(a, c);
            checks_on(measure_block(c, false, tag), code.hz.rows());
        }
    }
};

}  // namespace

PrepRecipe attach_verification(const StabilizerCode &code, const EncoderRecipe &encoder, VerifyVariant variant) {
    PrepRecipe r;
    r.code = code.name;
    r.basis = encoder.basis;
    r.variant = variant;
    const Circuit &enc = encoder.circuit;
    const Register &q = enc.reg("q");
    uint32_t n = static_cast<uint32_t>(code.n);
    if (q.size != n) {
        throw SynthesisError("encoder width does not match code");
    }
    r.staged = enc.reg("aux").size > 0;
    uint32_t blocks = variant == VerifyVariant::Heavy ? 4 : variant == VerifyVariant::Light ? 3 : 1;
    uint32_t per = enc.num_qubits();
    r.circuit.add_register("out", n);
    r.circuit.add_register("aux", per * blocks - n);
    // Block 0's code qubits are the output; everything else is packed behind.
    std::vector<uint32_t> offsets;
    uint32_t next = n;
    const char *labels = "ABCD";
    for (uint32_t b = 0; b < blocks; b++) {
        uint32_t base = 0;
        if (b > 0) {
            base = next;
            next += n;
        }
        std::vector<uint32_t> map(per);
        for (uint32_t i = 0; i < per; i++) {
            bool in_q = i >= q.offset && i < q.offset + q.size;
            map[i] = in_q ? base + (i - q.offset) : next++;
        }
        offsets.push_back(base);
        r.circuit.append(enc, map, std::string(1, labels[b]) + ".");
    }
    PrepBuilder pb{code, r.basis, r.circuit, offsets, n};
    auto check = [&](const char *kind, uint32_t a, uint32_t b) {
        std::string tag = std::string(1, labels[b]) + ".v";
        if (std::string(kind) == "compare") {
            pb.compare(a, b, tag);
        } else {
            pb.cross(a, b, tag);
        }
        r.checks.push_back(VerificationCheck{kind, a, b});
    };
    if (variant == VerifyVariant::Heavy) {
        check("compare", 0, 1);
        check("compare", 2, 3);
        check("cross", 0, 2);
    } else if (variant == VerifyVariant::Light) {
        check("cross", 0, 2);
        check("compare", 0, 1);
    }
    return r;
}

const PrepRecipe &catalog_prep(const std::string &name, Basis basis, VerifyVariant variant) {
    static std::map<std::tuple<std::string, Basis, VerifyVariant>, std::unique_ptr<PrepRecipe>> cache;
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    auto &slot = cache[{name, basis, variant}];
    if (!slot) {
        slot = std::make_unique<PrepRecipe>(attach_verification(catalog(name), catalog_encoder(name, basis), variant));
    }
    return *slot;
}

std::string PrepRecipe::serialize() const {
    std::ostringstream os;
    os << "# prep " << code << " " << to_string(basis) << " " << to_string(variant) << (staged ? " staged" : "")
       << "\n";
    for (const auto &c : checks) {
        os << "# check " << c.kind << " " << c.checked_block << " " << c.ancilla_block << "\n";
    }
    os << circuit.to_text();
    return os.str();
}

// --- residual weights and fault injection ---------------------------------

uint64_t ResidualWeigher::Reducer::reduce(uint64_t v) const {
    for (size_t i = 0; i < basis.size(); i++) {
        if ((v >> pivots[i]) & 1) {
            v ^= basis[i];
        }
    }
    return v;
}

namespace {

uint64_t to_mask(const BitVec &v) { return v.num_words() ? v.data()[0] : 0; }

template <typename Reducer>
Reducer make_reducer(const std::vector<BitVec> &rows) {
    Reducer r;
    for (const auto &row : rows) {
        uint64_t v = r.reduce(to_mask(row));
        if (!v) continue;
        int p = std::countr_zero(v);
        for (auto &b : r.basis) {
            if ((b >> p) & 1) b ^= v;
        }
        r.basis.push_back(v);
        r.pivots.push_back(p);
    }
    return r;
}

template <typename Reducer>
std::vector<std::vector<uint64_t>> low_weight_forms(const Reducer &r, size_t n, size_t cap) {
    std::vector<std::vector<uint64_t>> out(cap + 1);
    std::vector<uint32_t> idx;
    std::function<void(size_t, uint64_t)> rec = [&](size_t start, uint64_t mask) {
        size_t w = idx.size();
        if (w > 0) out[w].push_back(r.reduce(mask));
        if (w == cap) return;
        for (size_t q = start; q < n; q++) {
            idx.push_back(static_cast<uint32_t>(q));
            rec(q + 1, mask | (uint64_t{1} << q));
            idx.pop_back();
        }
    };
    rec(0, 0);
    for (auto &v : out) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

}  // namespace

ResidualWeigher::ResidualWeigher(const StabilizerCode &code, std::optional<Basis> basis, size_t cap) : cap_(cap) {
    code.require_css("ResidualWeigher");
    if (code.n > 64) {
        throw std::invalid_argument("ResidualWeigher: more than 64 qubits");
    }
    std::vector<BitVec> xs = code.hx.rows();
    std::vector<BitVec> zs = code.hz.rows();
    if (basis == Basis::Plus) {
        for (const auto &l : logical_x_rows(code)) xs.push_back(l);
    } else if (basis == Basis::Zero) {
        for (const auto &l : logical_z_rows(code)) zs.push_back(l);
    }
    rx_ = make_reducer<Reducer>(xs);
    rz_ = make_reducer<Reducer>(zs);
    x_low_ = low_weight_forms(rx_, code.n, cap);
    z_low_ = low_weight_forms(rz_, code.n, cap);
}

size_t ResidualWeigher::weigh(const Reducer &r, const std::vector<std::vector<uint64_t>> &by_weight,
                              uint64_t v) const {
    uint64_t red = r.reduce(v);
    if (!red) return 0;
    for (size_t w = 1; w <= cap_; w++) {
        if (std::binary_search(by_weight[w].begin(), by_weight[w].end(), red)) return w;
    }
    return cap_ + 1;
}

size_t ResidualWeigher::x_weight(uint64_t x) const { return weigh(rx_, x_low_, x); }
size_t ResidualWeigher::z_weight(uint64_t z) const { return weigh(rz_, z_low_, z); }

const CompiledCircuit &compiled_prep(const std::string &name, Basis basis, VerifyVariant variant) {
    static std::map<std::tuple<std::string, Basis, VerifyVariant>, std::unique_ptr<CompiledCircuit>> cache;
    std::lock_guard<std::recursive_mutex> lock(cache_mutex());
    auto &slot = cache[{name, basis, variant}];
    if (!slot) {
        const PrepRecipe &prep = catalog_prep(name, basis, variant);
        std::vector<uint32_t> out(catalog(name).n);
        std::iota(out.begin(), out.end(), 0);
        slot = std::make_unique<CompiledCircuit>(prep.circuit, NoiseModel{}, out);
    }
    return *slot;
}

InjectionReport inject_prep_faults(const PrepRecipe &prep, bool with_pairs, size_t workers) {
    const StabilizerCode &code = catalog(prep.code);
    size_t d = code.d_known.value_or(2);
    InjectionReport rep;
    rep.threshold = (d + 1) / 2;
    ResidualWeigher weigher(code, prep.basis, rep.threshold - 1);
    std::vector<uint32_t> out(code.n);
    std::iota(out.begin(), out.end(), 0);
    CompiledCircuit cc(prep.circuit, NoiseModel{}, out);
    size_t dw = cc.detector_words();

    struct Choice {
        uint32_t site;
        const uint64_t *e;
    };
    // Faults grouped by detector signature; only equal signatures cancel.
    std::map<std::vector<uint64_t>, std::vector<Choice>> groups;
    uint64_t total = 0;
    std::vector<uint64_t> per_site;
    for (uint32_t s = 0; s < cc.sites().size(); s++) {
        per_site.push_back(cc.sites()[s].choices);
        for (uint8_t c = 0; c < cc.sites()[s].choices; c++) {
            const uint64_t *e = cc.effect(s, c);
            total++;
            std::vector<uint64_t> sig(e, e + dw);
            bool accepted = std::all_of(sig.begin(), sig.end(), [](uint64_t w) { return w == 0; });
            if (accepted) {
                rep.single_accepted++;
                if (weigher.weight(e[dw], e[dw + 1]) >= rep.threshold) rep.single_bad++;
            }
            if (with_pairs) groups[std::move(sig)].push_back(Choice{s, e});
        }
    }
    rep.single_faults = total;
    if (!with_pairs) return rep;
    uint64_t same_site = 0;
    for (uint64_t c : per_site) same_site += c * (c - 1) / 2;
    rep.pairs = total * (total - 1) / 2 - same_site;

    std::vector<std::pair<const std::vector<Choice> *, size_t>> tasks;
    for (const auto &[sig, g] : groups) {
        for (size_t i = 0; i + 1 < g.size(); i++) tasks.emplace_back(&g, i);
    }
    std::atomic<uint64_t> bad{0};
    parallel_for(tasks.size(), workers, [&](size_t t) {
        const auto &g = *tasks[t].first;
        size_t i = tasks[t].second;
        uint64_t local = 0;
        for (size_t j = i + 1; j < g.size(); j++) {
            if (g[i].site == g[j].site) continue;
            uint64_t x = g[i].e[dw] ^ g[j].e[dw];
            uint64_t z = g[i].e[dw + 1] ^ g[j].e[dw + 1];
            if (weigher.weight(x, z) >= rep.threshold) local++;
        }
        bad += local;
    });
    rep.pair_bad = bad;
    rep.pairs_done = true;
    return rep;
}

// --- logical gadgets ------------------------------------------------------

namespace {

// Appends a prep with its output on qubits out_base.. and aux at aux_next..
void place_prep(Circuit &c, const PrepRecipe &prep, uint32_t out_base, uint32_t &aux_next, const std::string &prefix) {
    const Circuit &p = prep.circuit;
    const Register &out = p.reg("out");
    std::vector<uint32_t> map(p.num_qubits());
    for (uint32_t q = 0; q < p.num_qubits(); q++) {
        bool in_out = q >= out.offset && q < out.offset + out.size;
        map[q] = in_out ? out_base + (q - out.offset) : aux_next++;
    }
    c.append(p, map, prefix);
}

uint32_t aux_size(const PrepRecipe &p) { return p.circuit.num_qubits() - p.circuit.reg("out").size; }

}  // namespace

EcGadget steane_ec_gadget(const std::string &name, VerifyVariant variant) {
    const StabilizerCode &code = catalog(name);
    uint32_t n = static_cast<uint32_t>(code.n);
    const PrepRecipe &zero = catalog_prep(name, Basis::Zero, variant);
    const PrepRecipe &plus = catalog_prep(name, Basis::Plus, variant);
    EcGadget g;
    uint32_t data = g.circuit.add_register("data", n);
    uint32_t mid = g.circuit.add_register("mid", n);
    uint32_t out = g.circuit.add_register("out", n);
    uint32_t aux = g.circuit.add_register("aux", aux_size(zero) + aux_size(plus));
    place_prep(g.circuit, zero, mid, aux, "mid.");
    place_prep(g.circuit, plus, out, aux, "out.");
    for (uint32_t q = 0; q < n; q++) g.circuit.cnot(data + q, mid + q);
    for (uint32_t q = 0; q < n; q++) {
        g.z_step_measurements.push_back(g.circuit.measure_x(data + q, "z" + std::to_string(q)));
    }
    for (uint32_t q = 0; q < n; q++) g.circuit.cnot(out + q, mid + q);
    for (uint32_t q = 0; q < n; q++) {
        g.x_step_measurements.push_back(g.circuit.measure_z(mid + q, "x" + std::to_string(q)));
    }
    return g;
}

Circuit bell_prep(const std::string &name, VerifyVariant variant) {
    const StabilizerCode &code = catalog(name);
    uint32_t n = static_cast<uint32_t>(code.n);
    const PrepRecipe &plus = catalog_prep(name, Basis::Plus, variant);
    const PrepRecipe &zero = catalog_prep(name, Basis::Zero, variant);
    Circuit c;
    uint32_t a = c.add_register("a", n);
    uint32_t b = c.add_register("b", n);
    uint32_t aux = c.add_register("aux", aux_size(plus) + aux_size(zero));
    place_prep(c, plus, a, aux, "a.");
    place_prep(c, zero, b, aux, "b.");
    for (uint32_t q = 0; q < n; q++) c.cnot(a + q, b + q);
    return c;
}

TeleportedCnotGadget teleported_cnot_gadget(const std::string &name, VerifyVariant variant) {
    const StabilizerCode &code = catalog(name);
    uint32_t n = static_cast<uint32_t>(code.n);
    Circuit bell = bell_prep(name, variant);
    TeleportedCnotGadget g;
    uint32_t c = g.circuit.add_register("c", n);
    uint32_t t = g.circuit.add_register("t", n);
    uint32_t a = g.circuit.add_register("a", n);
    uint32_t b = g.circuit.add_register("b", n);
    uint32_t aux = g.circuit.add_register("aux", bell.num_qubits() - 2 * n);
    std::vector<uint32_t> map(bell.num_qubits());
    for (uint32_t q = 0; q < bell.num_qubits(); q++) {
        map[q] = q < n ? a + q : q < 2 * n ? b + (q - n) : aux + (q - 2 * n);
    }
    g.circuit.append(bell, map, "bell.");
    for (uint32_t q = 0; q < n; q++) g.circuit.cnot(a + q, c + q);
    for (uint32_t q = 0; q < n; q++) {
        g.control_measurements.push_back(g.circuit.measure_z(c + q, "c" + std::to_string(q)));
    }
    for (uint32_t q = 0; q < n; q++) g.circuit.cnot(t + q, b + q);
    for (uint32_t q = 0; q < n; q++) {
        g.target_measurements.push_back(g.circuit.measure_x(t + q, "t" + std::to_string(q)));
    }
    return g;
}

TargetedCnotSchedule targeted_cnot_schedule(const std::string &name, size_t control, size_t target) {
    const StabilizerCode &code = catalog(name);
    size_t k = code.k;
    if (control >= 2 * k || target >= 2 * k) {
        throw std::invalid_argument("targeted_cnot_schedule: logical index out of range");
    }
    if (control / k == target / k) {
        throw std::invalid_argument("targeted_cnot_schedule: control and target must be in different blocks");
    }
    bool swapped = control >= k;
    size_t i = control % k;
    size_t j = target % k;
    BitMatrix goal(k, k);
    goal.set(i, j, true);

    std::vector<BitMatrix> found;
    {
        std::lock_guard<std::recursive_mutex> lock(cache_mutex());
        const std::vector<BitMatrix> &acts = realizable_actions(name, true);
        std::map<std::string, size_t> index;
        for (size_t a = 0; a < acts.size(); a++) index[mat_key(acts[a])] = a;
        auto lookup = [&](const BitMatrix &m) -> std::optional<size_t> {
            auto it = index.find(mat_key(m));
            return it == index.end() ? std::nullopt : std::optional<size_t>(it->second);
        };
        // Depth 2, then 3, then 4 via a meet in the middle on pair sums.
        for (size_t a = 0; a < acts.size() && found.empty(); a++) {
            if (auto b = lookup(mat_add(goal, acts[a]))) found = {acts[a], acts[*b]};
        }
        for (size_t a = 0; a < acts.size() && found.empty(); a++) {
            for (size_t b = a; b < acts.size() && found.empty(); b++) {
                if (auto c = lookup(mat_add(goal, mat_add(acts[a], acts[b])))) found = {acts[a], acts[b], acts[*c]};
            }
        }
        if (found.empty()) {
            std::map<std::string, std::pair<size_t, size_t>> pair_sums;
            for (size_t a = 0; a < acts.size(); a++) {
                for (size_t b = a; b < acts.size(); b++) {
                    pair_sums.emplace(mat_key(mat_add(acts[a], acts[b])), std::make_pair(a, b));
                }
            }
            for (size_t a = 0; a < acts.size() && found.empty(); a++) {
                for (size_t b = a; b < acts.size() && found.empty(); b++) {
                    auto it = pair_sums.find(mat_key(mat_add(goal, mat_add(acts[a], acts[b]))));
                    if (it != pair_sums.end()) {
                        found = {acts[a], acts[b], acts[it->second.first], acts[it->second.second]};
                    }
                }
            }
        }
    }
    if (found.empty()) {
        throw SynthesisError("no schedule of at most four transversal rounds for this CNOT on " + name);
    }
    TargetedCnotSchedule s;
    uint32_t n = static_cast<uint32_t>(code.n);
    uint32_t ra = s.circuit.add_register("A", n);
    uint32_t rb = s.circuit.add_register("B", n);
    uint32_t from = swapped ? rb : ra;
    uint32_t to = swapped ? ra : rb;
    const std::string to_name = swapped ? "A" : "B";
    for (const auto &act : found) {
        Perm pi = permutation_for_x_action(name, act);
        Perm inv(n);
        for (uint32_t q = 0; q < n; q++) inv[pi[q]] = q;
        s.circuit.permute(to_name, inv);
        for (uint32_t q = 0; q < n; q++) s.circuit.cnot(from + q, to + q);
        s.circuit.permute(to_name, pi);
        s.round_perms.push_back(pi);
        s.round_actions.push_back(act);
    }
    return s;
}

Circuit iceberg_detect_gadget(const std::string &name) {
    if (name != "c422" && name != "c642") {
        throw std::invalid_argument("iceberg_detect_gadget: needs an Iceberg code");
    }
    uint32_t n = static_cast<uint32_t>(catalog(name).n);
    Circuit c;
    uint32_t d = c.add_register("data", n);
    uint32_t anc = c.add_register("anc", 4);
    uint32_t za = anc, zf = anc + 1, xa = anc + 2, xf = anc + 3;
    c.prep_z(za);
    c.prep_x(zf);
    for (uint32_t q = 0; q < n; q++) {
        if (q == n - 1) c.cnot(zf, za);
        c.cnot(d + q, za);
        if (q == 0) c.cnot(zf, za);
    }
    uint32_t m0 = c.measure_z(za, "za");
    uint32_t m1 = c.measure_x(zf, "zf");
    c.prep_x(xa);
    c.prep_z(xf);
    for (uint32_t q = 0; q < n; q++) {
        if (q == n - 1) c.cnot(xa, xf);
        c.cnot(xa, d + q);
        if (q == 0) c.cnot(xa, xf);
    }
    uint32_t m2 = c.measure_x(xa, "xa");
    uint32_t m3 = c.measure_z(xf, "xf");
    for (uint32_t m : {m0, m1, m2, m3}) c.abort_if({m});
    return c;
}

}  // namespace iceberg
