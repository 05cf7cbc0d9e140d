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

#ifndef ICEBERG_TABLEAU_H
#define ICEBERG_TABLEAU_H

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "iceberg/circuit.h"
#include "iceberg/pauli.h"

namespace iceberg {

/// Stabilizer tableau (destabilizers and stabilizers with signs) of an
/// n-qubit state, starting from |0...0>. Reference simulator for noiseless
/// checks; every gate costs O(n) and every measurement O(n^2 / 64).
class Tableau {
   public:
    explicit Tableau(size_t n);

    size_t num_qubits() const { return n_; }
    void h(size_t q);
    void cnot(size_t c, size_t t);
    void x(size_t q);
    void z(size_t q);
    void apply_pauli(const PauliString &p);
    /// Relabel: qubit qubits[i] moves to qubits[perm[i]].
    void permute(const std::vector<size_t> &qubits, const std::vector<uint32_t> &perm);

    /// Outcome bit (true = -1). Random outcomes use `forced` when given.
    bool measure_z(size_t q, std::mt19937_64 &rng, std::optional<bool> forced = std::nullopt);
    bool measure_x(size_t q, std::mt19937_64 &rng, std::optional<bool> forced = std::nullopt);
    bool measure_pauli(const PauliString &p, std::mt19937_64 &rng, std::optional<bool> forced = std::nullopt);
    void reset_z(size_t q, std::mt19937_64 &rng);
    void reset_x(size_t q, std::mt19937_64 &rng);

    /// Outcome bit if measuring p is deterministic, nullopt if random.
    std::optional<bool> expectation(const PauliString &p) const;

    /// Stabilizer generators as Pauli strings.
    std::vector<PauliString> stabilizers() const;

   private:
    size_t words() const { return w_; }
    uint64_t *xrow(size_t r) { return &x_[r * w_]; }
    uint64_t *zrow(size_t r) { return &z_[r * w_]; }
    const uint64_t *xrow(size_t r) const { return &x_[r * w_]; }
    const uint64_t *zrow(size_t r) const { return &z_[r * w_]; }
    bool getx(size_t r, size_t q) const { return (x_[r * w_ + q / 64] >> (q % 64)) & 1; }
    bool getz(size_t r, size_t q) const { return (z_[r * w_ + q / 64] >> (q % 64)) & 1; }
    /// row h <- row i * row h, with sign.
    void rowmul(size_t h, size_t i);
    bool anticommutes_row(size_t r, const PauliString &p) const;
    void set_row(size_t r, const PauliString &p);

    size_t n_;
    size_t w_;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    std::vector<uint8_t> sign_;
};

struct StabilizerRun {
    std::vector<bool> measurements;
    bool aborted = false;
    Tableau state;
};

/// Noiseless run of a circuit. Random measurement outcomes come from `seed`.
/// An ABORTIF with odd parity marks the run aborted; execution continues.
/// If `initial` is given it must have the circuit's qubit count.
StabilizerRun simulate_stabilizer(const Circuit &circuit, uint64_t seed, const Tableau *initial = nullptr);

}  // namespace iceberg

#endif
