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

#ifndef ICEBERG_FRAME_SIM_H
#define ICEBERG_FRAME_SIM_H

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "iceberg/bitvec.h"
#include "iceberg/circuit.h"

namespace iceberg {

/// One fired fault: index into fault_sites() and the choice within the site.
struct Fault {
    uint32_t site;
    uint8_t choice;
    bool operator==(const Fault &other) const = default;
    auto operator<=>(const Fault &other) const = default;
};
using FaultRecord = std::vector<Fault>;

/// Pauli frames of many shots, bit-packed: plane[q * words + w] holds shots
/// 64w..64w+63 of qubit q. Measurement flips and abort flags are packed the
/// same way. Everything is relative to the noiseless run.
struct FrameBatch {
    size_t shots = 0;
    size_t words = 0;
    std::vector<uint64_t> x;
    std::vector<uint64_t> z;
    std::vector<uint64_t> flips;
    std::vector<uint64_t> aborted;
    std::vector<FaultRecord> records;  // filled when recording was requested

    bool x_bit(size_t q, size_t shot) const { return (x[q * words + shot / 64] >> (shot % 64)) & 1; }
    bool z_bit(size_t q, size_t shot) const { return (z[q * words + shot / 64] >> (shot % 64)) & 1; }
    bool flip(size_t m, size_t shot) const { return (flips[m * words + shot / 64] >> (shot % 64)) & 1; }
    bool is_aborted(size_t shot) const { return (aborted[shot / 64] >> (shot % 64)) & 1; }
};

/// Monte-Carlo frame sampling. Once a shot aborts, no further faults fire in
/// it. Deterministic in `seed`.
FrameBatch sample_frames(const Circuit &circuit, const NoiseModel &noise, size_t shots, uint64_t seed,
                         bool record_faults = false);

/// Replays an explicit fault set in a single shot (shot 0 of the batch).
FrameBatch replay_faults(const Circuit &circuit, const NoiseModel &noise, const FaultRecord &faults);

/// Linear fault-effect table of a circuit: for every site and choice, the
/// ABORTIF parities it flips and the Pauli it leaves on the output qubits.
/// Valid for circuits whose ABORTIF parities are deterministic when
/// noiseless. A shot is accepted iff the XOR of its fault effects has no
/// detector bit set.
class CompiledCircuit {
   public:
    CompiledCircuit(const Circuit &circuit, const NoiseModel &noise, std::vector<uint32_t> output_qubits);

    const std::vector<FaultSite> &sites() const { return sites_; }
    size_t num_detectors() const { return num_detectors_; }
    size_t detector_words() const { return det_words_; }
    /// Words per effect row: detectors, then output X, then output Z.
    size_t stride() const { return det_words_ + 2; }
    const uint64_t *effect(uint32_t site, uint8_t choice) const {
        return &effects_[(site_offset_[site] + choice) * stride()];
    }
    const std::vector<uint32_t> &output_qubits() const { return outputs_; }
    size_t num_cnots() const { return num_cnots_; }
    size_t num_measurements() const { return num_measurements_; }
    /// Most probable event: no fault fires.
    double p_no_fault(double p) const { return std::pow(1 - p, double(sites_.size())); }

   private:
    std::vector<FaultSite> sites_;
    std::vector<uint32_t> outputs_;
    std::vector<uint32_t> site_offset_;
    std::vector<uint64_t> effects_;
    size_t num_detectors_ = 0;
    size_t det_words_ = 0;
    size_t num_cnots_ = 0;
    size_t num_measurements_ = 0;
};

/// Geometric skipping over independent Bernoulli(p) trials.
class GeometricSkipper {
   public:
    explicit GeometricSkipper(double p) : p_(p), inv_log_q_(p > 0 && p < 1 ? 1.0 / std::log1p(-p) : 0) {}
    /// Number of failures before the next success (huge when p == 0).
    uint64_t skip(std::mt19937_64 &rng) const {
        if (p_ <= 0) {
            return UINT64_MAX / 2;
        }
        if (p_ >= 1) {
            return 0;
        }
        double u = (double(rng() >> 11) + 0.5) * 0x1.0p-53;
        double s = std::floor(std::log(u) * inv_log_q_);
        return s > 1e18 ? UINT64_MAX / 2 : uint64_t(s);
    }
    double p() const { return p_; }

   private:
    double p_;
    double inv_log_q_;
};

/// Result of one attempt of a compiled circuit.
struct Attempt {
    bool accepted = true;
    uint64_t x = 0;
    uint64_t z = 0;
};

/// Samples attempts of a compiled circuit at error rate p.
class SparseSampler {
   public:
    SparseSampler(const CompiledCircuit &compiled, double p);
    /// One attempt; faults are appended to `record` when non-null.
    Attempt attempt(std::mt19937_64 &rng, FaultRecord *record = nullptr) const;
    /// Repeats attempts until one is accepted; `attempts` receives the count.
    Attempt until_accepted(std::mt19937_64 &rng, uint64_t &attempts, FaultRecord *record = nullptr) const;
    /// Deterministic outcome of a fault set.
    Attempt evaluate(const FaultRecord &faults) const;
    const CompiledCircuit &compiled() const { return *compiled_; }

   private:
    const CompiledCircuit *compiled_;
    GeometricSkipper skipper_;
};

inline uint8_t uniform_choice(std::mt19937_64 &rng, uint8_t n) {
    return n == 1 ? 0 : static_cast<uint8_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace iceberg

#endif
