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

#ifndef ICEBERG_PAULI_H
#define ICEBERG_PAULI_H

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iceberg/bitvec.h"

namespace iceberg {

/// A qubit relabeling: qubit i moves to position perm[i].
using Permutation = std::vector<size_t>;

bool is_permutation(std::span<const size_t> perm, size_t n);
Permutation inverse_permutation(std::span<const size_t> perm);

/// Signed n-qubit Pauli operator (-1)^sign * P_0 (x) ... (x) P_{n-1}.
///
/// Letters are Hermitian: (x,z) = (1,0) is X, (0,1) is Z, (1,1) is Y.
/// Products whose phase would be +-i are normalized to +-1 by dropping
/// the factor i; the real-Clifford circuits here never produce them for
/// commuting operands.
struct PauliString {
    BitVec xs;
    BitVec zs;
    bool negative = false;

    PauliString() = default;
    explicit PauliString(size_t n) : xs(n), zs(n) {}
    PauliString(BitVec x, BitVec z, bool neg = false);

    /// Parses "XZZXI", "-XX", "+·XYZ". The characters '.', '_' and the
    /// middle dot are accepted for the identity.
    static PauliString from_str(const std::string &text);
    static PauliString x_type(const BitVec &support);
    static PauliString z_type(const BitVec &support);

    size_t size() const { return xs.size(); }
    size_t weight() const { return (xs | zs).popcount(); }
    BitVec support() const { return xs | zs; }
    bool is_identity() const { return xs.none() && zs.none(); }
    /// 'I', 'X', 'Y' or 'Z'.
    char letter(size_t q) const;
    void set_letter(size_t q, char c);

    /// Letters only, using 'I' for identity and a leading '-' if negative.
    std::string str() const;

    /// Concatenated x||z bit vector of length 2n.
    BitVec symplectic() const;

    bool operator==(const PauliString &other) const = default;
};

/// Product p*q with the sign normalized to +-1.
PauliString pauli_mul(const PauliString &p, const PauliString &q);

/// True iff the symplectic inner product of p and q vanishes.
bool commutes(const PauliString &p, const PauliString &q);

/// Moves the letter on qubit i to qubit perm[i].
PauliString apply_permutation(const PauliString &p, std::span<const size_t> perm);
BitVec apply_permutation(const BitVec &v, std::span<const size_t> perm);

/// Tensor product p (x) q.
PauliString tensor(const PauliString &p, const PauliString &q);

}  // namespace iceberg

#endif
