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

#ifndef ICEBERG_DECODER_H
#define ICEBERG_DECODER_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iceberg/stabilizer_code.h"

namespace iceberg {

enum class PauliType { X, Z };
const char *to_string(PauliType t);

/// Lookup-table decoder for one error type of a CSS code with n < 64.
///
/// Errors are enumerated by increasing weight. The first correction reaching a
/// syndrome is kept; a later correction of the same weight that differs from it
/// by a logical operator turns the entry into REJECT. Syndromes not reached
/// within the weight cap are REJECT.
class DecoderTable {
   public:
    static constexpr uint64_t kReject = ~uint64_t{0};
    static constexpr uint64_t kDefaultBudget = 100'000'000;

    /// weight_cap defaults to the largest weight whose cumulative subset
    /// count fits in `budget`. Enumeration stops early once every syndrome of
    /// the check space has been reached.
    static DecoderTable build(const StabilizerCode &code, PauliType error_type,
                              std::optional<size_t> weight_cap = std::nullopt, uint64_t budget = kDefaultBudget);

    size_t n() const { return n_; }
    size_t num_checks() const { return check_masks_.size(); }
    size_t num_logicals() const { return logical_masks_.size(); }
    PauliType error_type() const { return type_; }
    size_t weight_cap() const { return weight_cap_; }
    const std::string &code_name() const { return code_name_; }
    uint64_t code_hash() const { return code_hash_; }

    /// Bit i is the parity of the error against check row i.
    uint64_t syndrome(uint64_t error) const;
    /// Bit j is the parity against the logical operator of the opposite type
    /// (logical Z's for X errors), i.e. the logical flip the error causes.
    uint64_t logical_flips(uint64_t error) const;
    /// Correction mask or kReject.
    uint64_t decode(uint64_t syndrome) const { return table_[syndrome]; }
    std::optional<BitVec> decode(const BitVec &syndrome) const;

    /// Logical flips after decoding a measured string; nullopt on REJECT.
    std::optional<uint64_t> decode_logical(uint64_t measured) const {
        uint64_t c = table_[syndrome(measured)];
        if (c == kReject) {
            return std::nullopt;
        }
        return logical_flips(measured ^ c);
    }

    const std::vector<uint64_t> &check_masks() const { return check_masks_; }
    const std::vector<uint64_t> &logical_masks() const { return logical_masks_; }
    size_t num_reject_syndromes() const;

    /// Binary export: magic, code hash, error type, weight cap, then the
    /// sorted (syndrome, correction) pairs of non-REJECT entries.
    void write_binary(std::ostream &out) const;
    static DecoderTable read_binary(std::istream &in, const StabilizerCode &code);

   private:
    DecoderTable() = default;
    void init(const StabilizerCode &code, PauliType type);
    std::string code_name_;
    uint64_t code_hash_ = 0;
    PauliType type_ = PauliType::X;
    size_t n_ = 0;
    size_t weight_cap_ = 0;
    std::vector<uint64_t> check_masks_;
    std::vector<uint64_t> logical_masks_;
    std::vector<uint64_t> table_;
};

/// Stable FNV-1a hash of the code's text form.
uint64_t code_hash(const StabilizerCode &code);

struct FaultCountReport {
    std::vector<uint64_t> n_logical;
    std::vector<uint64_t> n_reject;
    std::vector<uint64_t> n_total;
};

/// Exact counts over all subsets of at most max_weight qubits flipped
/// together, decoded with `table`.
FaultCountReport enumerate_fault_counts(const DecoderTable &table, size_t max_weight, size_t workers = 1);
FaultCountReport enumerate_fault_counts(const StabilizerCode &code, PauliType type, size_t max_weight);

struct Interval {
    double low;
    double high;
};
/// 95% Wilson score interval. Throws std::invalid_argument for n == 0 or k > n.
Interval wilson_interval(uint64_t k, uint64_t n);

/// p_R = rejected / (shots * rounds); p_L = logical_errors / (accepted * rounds).
struct RatesReport {
    std::string descriptor;
    uint64_t seed = 0;
    uint64_t shots = 0;
    uint64_t accepted = 0;
    uint64_t logical_errors = 0;
    uint64_t rounds = 1;
    double p = 0;

    uint64_t rejected() const { return shots - accepted; }
    double p_L() const;
    double p_R() const;
    Interval p_L_ci() const;
    Interval p_R_ci() const;

    /// Adds counts of another shard of the same experiment.
    void merge(const RatesReport &other);
    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

/// i.i.d. flips with probability p on every qubit, ideal syndrome, decode.
/// Deterministic in (table, p, shots, seed) regardless of `workers`.
RatesReport code_capacity_sample(const DecoderTable &table, double p, uint64_t shots, uint64_t seed,
                                 size_t workers = 1);

/// Truncated code-capacity series from fault counts:
/// p_R(p) = sum_w n_reject[w] p^w (1-p)^(n-w), and the logical analogue
/// (not conditioned on acceptance).
double series_reject(const FaultCountReport &r, size_t n, double p);
double series_logical(const FaultCountReport &r, size_t n, double p);

}  // namespace iceberg

#endif
