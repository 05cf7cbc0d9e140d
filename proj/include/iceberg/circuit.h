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

#ifndef ICEBERG_CIRCUIT_H
#define ICEBERG_CIRCUIT_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iceberg {

enum class GateType : uint8_t {
    PZ,       // reset to |0>
    PX,       // reset to |+>
    H,
    CNOT,     // targets[0] control, targets[1] target
    MZ,
    MX,
    PERM,     // relabel the qubits of a register: register qubit i moves to slot perm[i]
    ABORTIF,  // abort the shot if the listed measurement outcomes have odd parity
};

const char *gate_name(GateType t);

struct Gate {
    GateType type;
    std::vector<uint32_t> targets;  // qubits; for ABORTIF, measurement indices
    uint32_t reg = 0;               // PERM: register index
    uint32_t measurement = 0;       // MZ/MX: index into the measurement record
    bool operator==(const Gate &other) const = default;
};

struct Register {
    std::string name;
    uint32_t offset;
    uint32_t size;
    bool operator==(const Register &other) const = default;
};

struct CircuitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Clifford circuit over named qubit registers, stored as timesteps of
/// disjoint gates. Gates appended through the builder methods are packed into
/// the earliest timestep after every earlier gate on the same qubits
/// (measurements read by an ABORTIF count as its qubits).
class Circuit {
   public:
    uint32_t add_register(const std::string &name, uint32_t size);
    const std::vector<Register> &registers() const { return registers_; }
    const Register &reg(const std::string &name) const;
    uint32_t num_qubits() const { return num_qubits_; }
    uint32_t num_measurements() const { return static_cast<uint32_t>(measurement_keys_.size()); }
    const std::vector<std::string> &measurement_keys() const { return measurement_keys_; }
    uint32_t measurement_index(const std::string &key) const;
    const std::vector<std::vector<Gate>> &timesteps() const { return timesteps_; }
    size_t num_gates(GateType t) const;
    size_t num_abort_checks() const { return num_gates(GateType::ABORTIF); }

    void prep_z(uint32_t q);
    void prep_x(uint32_t q);
    void h(uint32_t q);
    void cnot(uint32_t control, uint32_t target);
    /// Returns the measurement index. Keys default to "m<index>".
    uint32_t measure_z(uint32_t q, const std::string &key = "");
    uint32_t measure_x(uint32_t q, const std::string &key = "");
    void permute(const std::string &reg, const std::vector<uint32_t> &perm);
    void abort_if(std::vector<uint32_t> measurements);

    /// Appends all gates of `other` with qubits remapped by `qubit_map`
    /// (other qubit i -> qubit_map[i]); measurement keys get `key_prefix`.
    /// Returns the first index of the appended measurements; they are
    /// renumbered in timestep order, so look keys up by name.
    uint32_t append(const Circuit &other, const std::vector<uint32_t> &qubit_map, const std::string &key_prefix);

    /// Line-oriented text: "REG name offset size" header lines, then one
    /// timestep per line with gates separated by "; ". Gate forms:
    /// "PZ q", "PX q", "H q", "CNOT c t", "MZ q key", "MX q key",
    /// "PERM reg i0 i1 ...", "ABORTIF k1^k2^...".
    std::string to_text() const;
    static Circuit from_text(const std::string &text);

    bool operator==(const Circuit &other) const = default;

   private:
    void place(Gate g, const std::vector<uint32_t> &touched);
    uint32_t new_measurement(const std::string &key);

    uint32_t num_qubits_ = 0;
    std::vector<Register> registers_;
    std::vector<std::vector<Gate>> timesteps_;
    std::vector<std::string> measurement_keys_;
    std::vector<uint32_t> qubit_free_at_;
    std::vector<uint32_t> measurement_time_;
};

/// Circuit noise: CNOTs followed by a uniformly random nontrivial
/// two-qubit Pauli with total probability p, measurement results flipped with
/// probability p. The other channels are off by default; when on, preps are
/// followed by the orthogonal flip, H by a random one-qubit Pauli, and every
/// qubit not acted on in a timestep by a random one-qubit Pauli, each with
/// probability p.
struct NoiseModel {
    double p = 0;
    bool two_qubit_depolarizing = true;
    bool measurement_flip = true;
    bool idle = false;
    bool one_qubit_gate = false;
    bool prep = false;
};

enum class SiteKind : uint8_t { CNOT, MEASURE, PREP, ONE_QUBIT, IDLE };

/// A place where a fault may fire. `choices` is the number of distinct faults
/// (15 for CNOT, 3 for one-qubit depolarizing, 1 for flips); each fires with
/// probability p / choices.
struct FaultSite {
    SiteKind kind;
    uint32_t timestep;
    uint32_t gate;  // index within the timestep; unused for IDLE
    uint32_t q0;
    uint32_t q1;
    uint8_t choices;
};

/// Fault sites in timestep order.
std::vector<FaultSite> fault_sites(const Circuit &c, const NoiseModel &noise);

/// Two-qubit Pauli for CNOT fault choice c in [0, 15): (c + 1) encodes
/// x0 | z0 << 1 | x1 << 2 | z1 << 3.
struct TwoQubitPauli {
    bool x0, z0, x1, z1;
};
inline TwoQubitPauli two_qubit_pauli(uint8_t choice) {
    uint8_t v = choice + 1;
    return {bool(v & 1), bool(v & 2), bool(v & 4), bool(v & 8)};
}
/// One-qubit Pauli for choice c in [0, 3): X, Z, Y.
inline std::pair<bool, bool> one_qubit_pauli(uint8_t choice) {
    uint8_t v = choice + 1;
    return {bool(v & 1), bool(v & 2)};
}

}  // namespace iceberg

#endif
