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

#include "iceberg/pauli.h"

#include <cctype>
#include <stdexcept>

namespace iceberg {

bool is_permutation(std::span<const size_t> perm, size_t n) {
    if (perm.size() != n) {
        return false;
    }
    std::vector<bool> seen(n, false);
    for (size_t v : perm) {
        if (v >= n || seen[v]) {
            return false;
        }
        seen[v] = true;
    }
    return true;
}

Permutation inverse_permutation(std::span<const size_t> perm) {
    if (!is_permutation(perm, perm.size())) {
        throw std::invalid_argument("inverse_permutation: not a bijection");
    }
    Permutation inv(perm.size());
    for (size_t i = 0; i < perm.size(); i++) {
        inv[perm[i]] = i;
    }
    return inv;
}

PauliString::PauliString(BitVec x, BitVec z, bool neg) : xs(std::move(x)), zs(std::move(z)), negative(neg) {
    if (xs.size() != zs.size()) {
        throw std::invalid_argument("PauliString: x and z parts differ in length");
    }
}

PauliString PauliString::from_str(const std::string &text) {
    bool neg = false;
    size_t start = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        neg = text[0] == '-';
        start = 1;
    }
    std::string letters;
    for (size_t i = start; i < text.size(); i++) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xB7) {
            letters.push_back('I');
            i++;
        } else if (c == '.' || c == '_' || c == 'I' || c == 'i') {
            letters.push_back('I');
        } else if (c == 'X' || c == 'Y' || c == 'Z' || c == 'x' || c == 'y' || c == 'z') {
            letters.push_back(static_cast<char>(std::toupper(c)));
        } else if (c == ' ' || c == '\t') {
            continue;
        } else {
            throw std::invalid_argument("PauliString::from_str: bad character in '" + text + "'");
        }
    }
    PauliString p(letters.size());
    for (size_t q = 0; q < letters.size(); q++) {
        p.set_letter(q, letters[q]);
    }
    p.negative = neg;
    return p;
}

PauliString PauliString::x_type(const BitVec &support) { return PauliString(support, BitVec(support.size())); }
PauliString PauliString::z_type(const BitVec &support) { return PauliString(BitVec(support.size()), support); }

char PauliString::letter(size_t q) const {
    bool x = xs.get(q);
    bool z = zs.get(q);
    if (x && z) {
        return 'Y';
    }
    return x ? 'X' : (z ? 'Z' : 'I');
}

void PauliString::set_letter(size_t q, char c) {
    switch (c) {
        case 'I':
            xs.set(q, false);
            zs.set(q, false);
            break;
        case 'X':
            xs.set(q, true);
            zs.set(q, false);
            break;
        case 'Y':
            xs.set(q, true);
            zs.set(q, true);
            break;
        case 'Z':
            xs.set(q, false);
            zs.set(q, true);
            break;
        default:
            throw std::invalid_argument("PauliString::set_letter: bad letter");
    }
}

std::string PauliString::str() const {
    std::string s = negative ? "-" : "";
    for (size_t q = 0; q < size(); q++) {
        s.push_back(letter(q));
    }
    return s;
}

BitVec PauliString::symplectic() const {
    size_t n = size();
    BitVec v(2 * n);
    for (size_t q = 0; q < n; q++) {
        v.set(q, xs.get(q));
        v.set(n + q, zs.get(q));
    }
    return v;
}

namespace {

// Exponent of i picked up when multiplying single-qubit Hermitian letters.
int phase_exponent(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) {
        return 0;
    }
    if (x1 && z1) {
        return int(z2) - int(x2);
    }
    if (x1) {
        return int(z2) * (2 * int(x2) - 1);
    }
    return int(x2) * (1 - 2 * int(z2));
}

}  // namespace

PauliString pauli_mul(const PauliString &p, const PauliString &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("pauli_mul: length mismatch");
    }
    int e = 2 * int(p.negative) + 2 * int(q.negative);
    for (size_t k = 0; k < p.size(); k++) {
        e += phase_exponent(p.xs.get(k), p.zs.get(k), q.xs.get(k), q.zs.get(k));
    }
    e = ((e % 4) + 4) % 4;
    return PauliString(p.xs ^ q.xs, p.zs ^ q.zs, (e & 2) != 0);
}

bool commutes(const PauliString &p, const PauliString &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("commutes: length mismatch");
    }
    return p.xs.dot(q.zs) == p.zs.dot(q.xs);
}

BitVec apply_permutation(const BitVec &v, std::span<const size_t> perm) {
    if (!is_permutation(perm, v.size())) {
        throw std::invalid_argument("apply_permutation: not a bijection");
    }
    BitVec out(v.size());
    for (size_t i = 0; i < v.size(); i++) {
        if (v.get(i)) {
            out.set(perm[i], true);
        }
    }
    return out;
}

PauliString apply_permutation(const PauliString &p, std::span<const size_t> perm) {
    return PauliString(apply_permutation(p.xs, perm), apply_permutation(p.zs, perm), p.negative);
}

PauliString tensor(const PauliString &p, const PauliString &q) {
    size_t n = p.size() + q.size();
    PauliString r(n);
    for (size_t i = 0; i < p.size(); i++) {
        r.xs.set(i, p.xs.get(i));
        r.zs.set(i, p.zs.get(i));
    }
    for (size_t i = 0; i < q.size(); i++) {
        r.xs.set(p.size() + i, q.xs.get(i));
        r.zs.set(p.size() + i, q.zs.get(i));
    }
    r.negative = p.negative != q.negative;
    return r;
}

}  // namespace iceberg
