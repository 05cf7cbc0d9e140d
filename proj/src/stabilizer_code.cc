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

#include <algorithm>
#include <bit>
#include <sstream>

namespace iceberg {

namespace {

constexpr size_t kMaxCanonicalizeLog2 = 24;

uint64_t reverse_bits(uint64_t v) {
    v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
    v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
    v = ((v >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((v & 0x0F0F0F0F0F0F0F0FULL) << 4);
    v = ((v >> 8) & 0x00FF00FF00FF00FFULL) | ((v & 0x00FF00FF00FF00FFULL) << 8);
    v = ((v >> 16) & 0x0000FFFF0000FFFFULL) | ((v & 0x0000FFFF0000FFFFULL) << 16);
    return (v >> 32) | (v << 32);
}

// True if a should be preferred over b: lower weight, then lexicographically
// smaller when read from qubit 0.
bool better_mask(uint64_t a, uint64_t b) {
    int wa = std::popcount(a);
    int wb = std::popcount(b);
    if (wa != wb) {
        return wa < wb;
    }
    return reverse_bits(a) < reverse_bits(b);
}

uint64_t min_weight_coset(uint64_t base, const std::vector<uint64_t> &gens) {
    uint64_t best = base;
    uint64_t cur = base;
    uint64_t total = uint64_t{1} << gens.size();
    for (uint64_t i = 1; i < total; i++) {
        cur ^= gens[std::countr_zero(i)];
        if (better_mask(cur, best)) {
            best = cur;
        }
    }
    return best;
}

std::vector<uint64_t> masks_of(const RowSpace &rs) {
    std::vector<uint64_t> out;
    for (const auto &b : rs.basis()) {
        out.push_back(b.mask());
    }
    return out;
}

BitMatrix invert(const BitMatrix &a) {
    size_t k = a.num_rows();
    std::vector<BitVec> left = a.rows();
    std::vector<BitVec> right = BitMatrix::identity(k).rows();
    for (size_t c = 0; c < k; c++) {
        size_t p = k;
        for (size_t r = c; r < k; r++) {
            if (left[r].get(c)) {
                p = r;
                break;
            }
        }
        if (p == k) {
            throw InconsistentCode("singular logical pairing matrix");
        }
        std::swap(left[c], left[p]);
        std::swap(right[c], right[p]);
        for (size_t r = 0; r < k; r++) {
            if (r != c && left[r].get(c)) {
                left[r] ^= left[c];
                right[r] ^= right[c];
            }
        }
    }
    return BitMatrix::from_rows(right, k);
}

PauliString from_symplectic(const BitVec &v, size_t n) {
    PauliString p(n);
    for (size_t q = 0; q < n; q++) {
        p.xs.set(q, v.get(q));
        p.zs.set(q, v.get(n + q));
    }
    return p;
}

// Omega-dual row: (z || x), so that dot(v, dual(s)) is the symplectic product.
BitVec symplectic_dual(const BitVec &v, size_t n) {
    BitVec out(2 * n);
    for (size_t q = 0; q < n; q++) {
        out.set(q, v.get(n + q));
        out.set(n + q, v.get(q));
    }
    return out;
}

bool symplectic_product(const BitVec &a, const BitVec &b, size_t n) { return a.dot(symplectic_dual(b, n)); }

}  // namespace

StabilizerCode StabilizerCode::from_generators(std::string name, std::vector<PauliString> generators,
                                               std::vector<PauliString> logical_x,
                                               std::vector<PauliString> logical_z, std::optional<size_t> d) {
    if (generators.empty() && logical_x.empty()) {
        throw InconsistentCode("from_generators: need at least one generator or logical to fix n");
    }
    StabilizerCode c;
    c.name = std::move(name);
    c.n = generators.empty() ? logical_x[0].size() : generators[0].size();
    c.css_ = true;
    for (const auto &g : generators) {
        if (g.size() != c.n) {
            throw InconsistentCode("from_generators: generator length mismatch");
        }
        if (g.xs.any() && g.zs.any()) {
            c.css_ = false;
        }
    }
    c.generators = std::move(generators);
    c.hx = BitMatrix(0, c.n);
    c.hz = BitMatrix(0, c.n);
    if (c.css_) {
        for (const auto &g : c.generators) {
            if (g.xs.any()) {
                c.hx.push_row(g.xs);
            } else if (g.zs.any()) {
                c.hz.push_row(g.zs);
            }
        }
    }
    c.k = c.n - rank(c.symplectic_generators());
    c.d_known = d;
    if (logical_x.empty() && logical_z.empty()) {
        Logicals l = derive_logicals(c);
        c.logical_x = std::move(l.x);
        c.logical_z = std::move(l.z);
    } else {
        c.logical_x = std::move(logical_x);
        c.logical_z = std::move(logical_z);
    }
    return c;
}

StabilizerCode StabilizerCode::from_css(std::string name, const BitMatrix &hx, const BitMatrix &hz,
                                        std::vector<PauliString> logical_x, std::vector<PauliString> logical_z,
                                        std::optional<size_t> d) {
    size_t n = hx.num_rows() ? hx.num_cols() : hz.num_cols();
    std::vector<PauliString> gens;
    for (const auto &r : hx.rows()) {
        gens.push_back(PauliString::x_type(r));
    }
    for (const auto &r : hz.rows()) {
        gens.push_back(PauliString::z_type(r));
    }
    if (gens.empty()) {
        StabilizerCode c;
        c.name = std::move(name);
        c.n = n;
        c.k = n;
        c.css_ = true;
        c.hx = BitMatrix(0, n);
        c.hz = BitMatrix(0, n);
        c.d_known = d;
        if (logical_x.empty()) {
            for (size_t q = 0; q < n; q++) {
                PauliString x(n);
                x.xs.set(q, true);
                PauliString z(n);
                z.zs.set(q, true);
                c.logical_x.push_back(x);
                c.logical_z.push_back(z);
            }
        } else {
            c.logical_x = std::move(logical_x);
            c.logical_z = std::move(logical_z);
        }
        return c;
    }
    return from_generators(std::move(name), std::move(gens), std::move(logical_x), std::move(logical_z), d);
}

void StabilizerCode::require_css(const char *what) const {
    if (!css_) {
        throw NotCssError(std::string(what) + ": code '" + name + "' is not CSS");
    }
}

bool StabilizerCode::is_self_dual() const { return css_ && same_rowspace(hx, hz); }

BitMatrix StabilizerCode::symplectic_generators() const {
    BitMatrix m(0, 2 * n);
    for (const auto &g : generators) {
        m.push_row(g.symplectic());
    }
    return m;
}

StabilizerCode StabilizerCode::css_dual() const {
    require_css("css_dual");
    std::vector<PauliString> lx;
    std::vector<PauliString> lz;
    for (const auto &p : logical_z) {
        lx.push_back(PauliString::x_type(p.zs));
    }
    for (const auto &p : logical_x) {
        lz.push_back(PauliString::z_type(p.xs));
    }
    StabilizerCode c = from_css(name + "_dual", hz, hx, lx, lz, d_known);
    c.ququad_grouping = ququad_grouping;
    return c;
}

void validate(const StabilizerCode &code) {
    const auto &g = code.generators;
    for (size_t i = 0; i < g.size(); i++) {
        if (g[i].size() != code.n) {
            throw InconsistentCode("validate: generator length mismatch");
        }
        for (size_t j = i + 1; j < g.size(); j++) {
            if (!commutes(g[i], g[j])) {
                throw InconsistentCode("validate: generators " + std::to_string(i) + " and " + std::to_string(j) +
                                       " anticommute");
            }
        }
    }
    if (rank(code.symplectic_generators()) != code.n - code.k) {
        throw InconsistentCode("validate: generator rank is not n - k");
    }
    if (code.logical_x.size() != code.k || code.logical_z.size() != code.k) {
        throw InconsistentCode("validate: expected k logical X and k logical Z operators");
    }
    for (size_t i = 0; i < code.k; i++) {
        for (const auto &s : g) {
            if (!commutes(s, code.logical_x[i]) || !commutes(s, code.logical_z[i])) {
                throw InconsistentCode("validate: logical operator anticommutes with a generator");
            }
        }
        for (size_t j = 0; j < code.k; j++) {
            bool xz = !commutes(code.logical_x[i], code.logical_z[j]);
            if (xz != (i == j)) {
                throw InconsistentCode("validate: logical X/Z pairing is not canonical");
            }
            if (!commutes(code.logical_x[i], code.logical_x[j]) || !commutes(code.logical_z[i], code.logical_z[j])) {
                throw InconsistentCode("validate: logical operators of the same type anticommute");
            }
        }
    }
    if (code.is_css() && code.hx.num_rows() && code.hz.num_rows()) {
        BitMatrix prod = code.hx.multiply(code.hz.transposed());
        for (const auto &r : prod.rows()) {
            if (r.any()) {
                throw InconsistentCode("validate: hx hz^T != 0");
            }
        }
    }
}

PauliString canonical_representative(const StabilizerCode &code, const PauliString &p) {
    size_t n = code.n;
    if (code.is_css() && n <= 64) {
        RowSpace sx(code.hx);
        RowSpace sz(code.hz);
        PauliString out(n);
        if (sx.dimension() <= kMaxCanonicalizeLog2) {
            out.xs = BitVec::from_mask(n, min_weight_coset(p.xs.mask(), masks_of(sx)));
        } else {
            out.xs = p.xs;
        }
        if (sz.dimension() <= kMaxCanonicalizeLog2) {
            out.zs = BitVec::from_mask(n, min_weight_coset(p.zs.mask(), masks_of(sz)));
        } else {
            out.zs = p.zs;
        }
        return out;
    }
    RowSpace s(code.symplectic_generators());
    if (s.dimension() > kMaxCanonicalizeLog2) {
        return PauliString(p.xs, p.zs);
    }
    BitVec best = p.symplectic();
    BitVec cur = best;
    auto weight = [n](const BitVec &v) {
        size_t w = 0;
        for (size_t q = 0; q < n; q++) {
            w += v.get(q) || v.get(n + q);
        }
        return w;
    };
    size_t best_w = weight(best);
    uint64_t total = uint64_t{1} << s.dimension();
    for (uint64_t i = 1; i < total; i++) {
        cur ^= s.basis()[std::countr_zero(i)];
        size_t w = weight(cur);
        if (w < best_w || (w == best_w && from_symplectic(cur, n).str() < from_symplectic(best, n).str())) {
            best = cur;
            best_w = w;
        }
    }
    return from_symplectic(best, n);
}

Logicals derive_logicals(const StabilizerCode &code) {
    size_t n = code.n;
    Logicals out;
    if (code.is_css()) {
        RowSpace sx(code.hx);
        RowSpace sz(code.hz);
        std::vector<BitVec> lx;
        std::vector<BitVec> lz;
        RowSpace ext_x = sx;
        BitMatrix ker_z = nullspace(code.hz);
        for (const auto &v : ker_z.rows()) {
            if (ext_x.add(v)) {
                lx.push_back(v);
            }
        }
        RowSpace ext_z = sz;
        BitMatrix ker_x = nullspace(code.hx);
        for (const auto &v : ker_x.rows()) {
            if (ext_z.add(v)) {
                lz.push_back(v);
            }
        }
        if (lx.size() != code.k || lz.size() != code.k) {
            throw InconsistentCode("derive_logicals: logical count does not match n - rank");
        }
        size_t k = code.k;
        BitMatrix a(k, k);
        for (size_t i = 0; i < k; i++) {
            for (size_t j = 0; j < k; j++) {
                a.set(i, j, lx[i].dot(lz[j]));
            }
        }
        BitMatrix c = invert(a);
        for (size_t j = 0; j < k; j++) {
            BitVec z(n);
            for (size_t m = 0; m < k; m++) {
                if (c.get(m, j)) {
                    z ^= lz[m];
                }
            }
            out.x.push_back(canonical_representative(code, PauliString::x_type(lx[j])));
            out.z.push_back(canonical_representative(code, PauliString::z_type(z)));
        }
        return out;
    }

    BitMatrix s = code.symplectic_generators();
    for (size_t i = 0; i < s.num_rows(); i++) {
        for (size_t j = i + 1; j < s.num_rows(); j++) {
            if (symplectic_product(s.row(i), s.row(j), n)) {
                throw InconsistentCode("derive_logicals: generators anticommute");
            }
        }
    }
    BitMatrix duals(0, 2 * n);
    for (const auto &r : s.rows()) {
        duals.push_row(symplectic_dual(r, n));
    }
    RowSpace ext(s);
    std::vector<BitVec> cand;
    BitMatrix normalizer = s.num_rows() ? nullspace(duals) : BitMatrix::identity(2 * n);
    for (const auto &v : normalizer.rows()) {
        if (ext.add(v)) {
            cand.push_back(v);
        }
    }
    if (cand.size() != 2 * code.k) {
        throw InconsistentCode("derive_logicals: normalizer dimension mismatch");
    }
    while (!cand.empty()) {
        BitVec u = cand[0];
        size_t partner = cand.size();
        for (size_t j = 1; j < cand.size(); j++) {
            if (symplectic_product(u, cand[j], n)) {
                partner = j;
                break;
            }
        }
        if (partner == cand.size()) {
            throw InconsistentCode("derive_logicals: degenerate logical space");
        }
        BitVec v = cand[partner];
        std::vector<BitVec> rest;
        for (size_t j = 1; j < cand.size(); j++) {
            if (j == partner) {
                continue;
            }
            BitVec w = cand[j];
            if (symplectic_product(w, v, n)) {
                w ^= u;
            }
            if (symplectic_product(w, u, n)) {
                w ^= v;
            }
            rest.push_back(std::move(w));
        }
        out.x.push_back(canonical_representative(code, from_symplectic(u, n)));
        out.z.push_back(canonical_representative(code, from_symplectic(v, n)));
        cand = std::move(rest);
    }
    return out;
}

std::pair<size_t, size_t> css_distance(const StabilizerCode &code, size_t max_log2_enumeration) {
    code.require_css("css_distance");
    if (code.k == 0) {
        throw InconsistentCode("css_distance: code has no logical qubits");
    }
    if (code.n > 64) {
        throw BudgetExceeded("css_distance: n > 64 not supported by the enumerator");
    }
    auto one_side = [&](const BitMatrix &checks, const std::vector<PauliString> &logicals, bool x_side) {
        RowSpace s(checks);
        size_t dim = s.dimension() + logicals.size();
        if (dim > max_log2_enumeration) {
            throw BudgetExceeded("css_distance: enumeration of 2^" + std::to_string(dim) +
                                 " codewords exceeds budget 2^" + std::to_string(max_log2_enumeration));
        }
        std::vector<uint64_t> basis = masks_of(s);
        size_t r = basis.size();
        for (const auto &l : logicals) {
            basis.push_back(x_side ? l.xs.mask() : l.zs.mask());
        }
        uint64_t cur = 0;
        uint64_t logical_part = 0;
        size_t best = code.n + 1;
        uint64_t total = uint64_t{1} << dim;
        for (uint64_t i = 1; i < total; i++) {
            size_t j = std::countr_zero(i);
            cur ^= basis[j];
            if (j >= r) {
                logical_part ^= uint64_t{1} << (j - r);
            }
            if (logical_part) {
                size_t w = std::popcount(cur);
                if (w < best) {
                    best = w;
                }
            }
        }
        return best;
    };
    size_t dx = one_side(code.hx, code.logical_x, true);
    size_t dz = one_side(code.hz, code.logical_z, false);
    return {dx, dz};
}

bool in_normalizer(const StabilizerCode &code, const PauliString &p) {
    for (const auto &g : code.generators) {
        if (!commutes(g, p)) {
            return false;
        }
    }
    return true;
}

bool in_stabilizer_group(const StabilizerCode &code, const PauliString &p) {
    return RowSpace(code.symplectic_generators()).contains(p.symplectic());
}

size_t brute_force_distance(const StabilizerCode &code) {
    size_t n = code.n;
    if (n > 12) {
        throw BudgetExceeded("brute_force_distance: n > 12");
    }
    if (code.k == 0) {
        throw InconsistentCode("brute_force_distance: code has no logical qubits");
    }
    std::vector<std::pair<uint64_t, uint64_t>> gens;
    for (const auto &g : code.generators) {
        gens.emplace_back(g.xs.mask(), g.zs.mask());
    }
    RowSpace stab(code.symplectic_generators());
    for (size_t w = 1; w <= n; w++) {
        for (uint64_t support = 0; support < (uint64_t{1} << n); support++) {
            if (static_cast<size_t>(std::popcount(support)) != w) {
                continue;
            }
            std::vector<size_t> qs;
            for (size_t q = 0; q < n; q++) {
                if ((support >> q) & 1) {
                    qs.push_back(q);
                }
            }
            uint64_t combos = 1;
            for (size_t i = 0; i < w; i++) {
                combos *= 3;
            }
            for (uint64_t c = 0; c < combos; c++) {
                uint64_t x = 0;
                uint64_t z = 0;
                uint64_t t = c;
                for (size_t q : qs) {
                    uint64_t letter = t % 3 + 1;
                    t /= 3;
                    if (letter & 1) {
                        x |= uint64_t{1} << q;
                    }
                    if (letter & 2) {
                        z |= uint64_t{1} << q;
                    }
                }
                bool ok = true;
                for (auto [gx, gz] : gens) {
                    if ((std::popcount(x & gz) + std::popcount(z & gx)) & 1) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) {
                    continue;
                }
                PauliString p(BitVec::from_mask(n, x), BitVec::from_mask(n, z));
                if (!stab.contains(p.symplectic())) {
                    return w;
                }
            }
        }
    }
    return n + 1;
}

StabilizerCode apply_permutation(const StabilizerCode &code, std::span<const size_t> perm) {
    if (!is_permutation(perm, code.n)) {
        throw std::invalid_argument("apply_permutation: not a bijection");
    }
    std::vector<PauliString> gens;
    for (const auto &g : code.generators) {
        gens.push_back(apply_permutation(g, perm));
    }
    std::vector<PauliString> lx;
    std::vector<PauliString> lz;
    for (const auto &p : code.logical_x) {
        lx.push_back(apply_permutation(p, perm));
    }
    for (const auto &p : code.logical_z) {
        lz.push_back(apply_permutation(p, perm));
    }
    StabilizerCode c = StabilizerCode::from_generators(code.name, std::move(gens), std::move(lx), std::move(lz),
                                                       code.d_known);
    for (auto [a, b] : code.ququad_grouping) {
        c.ququad_grouping.emplace_back(perm[a], perm[b]);
    }
    return c;
}

bool is_automorphism(const StabilizerCode &code, std::span<const size_t> perm) {
    if (!is_permutation(perm, code.n)) {
        return false;
    }
    RowSpace s(code.symplectic_generators());
    for (const auto &g : code.generators) {
        if (!s.contains(apply_permutation(g, perm).symplectic())) {
            return false;
        }
    }
    return true;
}

BitVec logical_coordinates(const StabilizerCode &code, const PauliString &p) {
    size_t k = code.k;
    BitVec c(2 * k);
    for (size_t j = 0; j < k; j++) {
        c.set(j, !commutes(p, code.logical_z[j]));
        c.set(k + j, !commutes(p, code.logical_x[j]));
    }
    return c;
}

LogicalAction logical_action_of_permutation(const StabilizerCode &code, std::span<const size_t> perm) {
    if (!is_permutation(perm, code.n)) {
        throw std::invalid_argument("logical_action_of_permutation: not a bijection");
    }
    if (!is_automorphism(code, perm)) {
        throw NotAnAutomorphism("permutation does not preserve the stabilizer group of '" + code.name + "'");
    }
    size_t k = code.k;
    BitMatrix s = code.symplectic_generators();
    LogicalAction action{BitMatrix(2 * k, 2 * k), BitVec(2 * k)};
    std::vector<PauliString> basis = code.logical_x;
    basis.insert(basis.end(), code.logical_z.begin(), code.logical_z.end());
    for (size_t j = 0; j < 2 * k; j++) {
        PauliString image = apply_permutation(basis[j], perm);
        BitVec coords = logical_coordinates(code, image);
        PauliString residual = image;
        for (size_t i = 0; i < 2 * k; i++) {
            action.matrix.set(i, j, coords.get(i));
            if (coords.get(i)) {
                residual = pauli_mul(residual, basis[i]);
            }
        }
        auto combo = solve_row_combination(s, residual.symplectic());
        if (!combo) {
            throw NotAnAutomorphism("logical image is not a logical operator");
        }
        PauliString stab(code.n);
        for (size_t r : combo->set_bits()) {
            stab = pauli_mul(stab, code.generators[r]);
        }
        action.signs.set(j, stab.negative != residual.negative);
    }
    return action;
}

bool is_symplectic(const BitMatrix &m) {
    size_t two_k = m.num_rows();
    if (two_k != m.num_cols() || two_k % 2) {
        return false;
    }
    size_t k = two_k / 2;
    BitMatrix omega(two_k, two_k);
    for (size_t i = 0; i < k; i++) {
        omega.set(i, k + i, true);
        omega.set(k + i, i, true);
    }
    return m.transposed().multiply(omega).multiply(m) == omega;
}

std::string to_text(const StabilizerCode &code) {
    std::ostringstream out;
    out << code.n << ' ' << code.k << ' ';
    if (code.d_known) {
        out << *code.d_known;
    } else {
        out << '?';
    }
    out << '\n';
    for (const auto &g : code.generators) {
        out << g.str() << '\n';
    }
    out << "--\n";
    for (size_t i = 0; i < code.k; i++) {
        out << 'X' << (i + 1) << ' ' << code.logical_x[i].str() << '\n';
        out << 'Z' << (i + 1) << ' ' << code.logical_z[i].str() << '\n';
    }
    return out.str();
}

StabilizerCode from_text(const std::string &text, const std::string &name) {
    std::istringstream in(text);
    std::string line;
    size_t n = 0;
    size_t k = 0;
    std::optional<size_t> d;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("from_text: empty input");
    }
    {
        std::istringstream header(line);
        std::string ds;
        if (!(header >> n >> k >> ds)) {
            throw std::invalid_argument("from_text: bad header '" + line + "'");
        }
        if (ds != "?") {
            d = std::stoul(ds);
        }
    }
    std::vector<PauliString> gens;
    bool in_logicals = false;
    std::vector<std::optional<PauliString>> lx(k);
    std::vector<std::optional<PauliString>> lz(k);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line == "--") {
            in_logicals = true;
            continue;
        }
        if (!in_logicals) {
            gens.push_back(PauliString::from_str(line));
            if (gens.back().size() != n) {
                throw std::invalid_argument("from_text: generator length != n");
            }
            continue;
        }
        std::istringstream row(line);
        std::string label;
        std::string letters;
        if (!(row >> label >> letters) || label.size() < 2 || (label[0] != 'X' && label[0] != 'Z')) {
            throw std::invalid_argument("from_text: bad logical row '" + line + "'");
        }
        size_t idx = std::stoul(label.substr(1));
        if (idx == 0 || idx > k) {
            throw std::invalid_argument("from_text: logical index out of range");
        }
        auto &slot = label[0] == 'X' ? lx[idx - 1] : lz[idx - 1];
        slot = PauliString::from_str(letters);
    }
    std::vector<PauliString> lxs;
    std::vector<PauliString> lzs;
    for (size_t i = 0; i < k; i++) {
        if (!lx[i] || !lz[i]) {
            throw std::invalid_argument("from_text: missing logical operator rows");
        }
        lxs.push_back(*lx[i]);
        lzs.push_back(*lz[i]);
    }
    StabilizerCode c = gens.empty() ? StabilizerCode::from_css(name, BitMatrix(0, n), BitMatrix(0, n), lxs, lzs, d)
                                    : StabilizerCode::from_generators(name, std::move(gens), lxs, lzs, d);
    if (c.k != k) {
        throw InconsistentCode("from_text: header k does not match generator rank");
    }
    validate(c);
    return c;
}

}  // namespace iceberg
