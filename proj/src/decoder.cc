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

#include "iceberg/decoder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>

#include "iceberg/parallel.h"
#include "json.hpp"

namespace iceberg {

namespace {

constexpr size_t kMaxChecks = 30;
constexpr uint64_t kShardShots = 1 << 16;
constexpr char kMagic[8] = {'I', 'C', 'B', 'G', 'T', 'B', 'L', '1'};

uint64_t binomial(size_t n, size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    long double r = 1;
    for (size_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return static_cast<uint64_t>(std::llround(r));
}

// Next mask with the same popcount (Gosper's hack).
inline uint64_t next_combination(uint64_t x) {
    uint64_t c = x & (~x + 1);
    uint64_t r = x + c;
    return (((r ^ x) >> 2) / c) | r;
}

template <typename F>
void for_each_subset(size_t n, size_t w, F &&fn) {
    if (w == 0) {
        fn(uint64_t{0});
        return;
    }
    if (w > n) {
        return;
    }
    uint64_t x = (uint64_t{1} << w) - 1;
    uint64_t limit = uint64_t{1} << n;
    while (x < limit) {
        fn(x);
        x = next_combination(x);
    }
}

}  // namespace

const char *to_string(PauliType t) { return t == PauliType::X ? "X" : "Z"; }

uint64_t code_hash(const StabilizerCode &code) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : to_text(code)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void DecoderTable::init(const StabilizerCode &code, PauliType type) {
    code.require_css("DecoderTable");
    if (code.n >= 64) {
        throw BudgetExceeded("DecoderTable: n >= 64 not supported");
    }
    code_name_ = code.name;
    code_hash_ = iceberg::code_hash(code);
    type_ = type;
    n_ = code.n;
    const BitMatrix &checks = type == PauliType::X ? code.hz : code.hx;
    if (checks.num_rows() > kMaxChecks) {
        throw BudgetExceeded("DecoderTable: more than 30 check rows");
    }
    check_masks_.clear();
    for (const auto &r : checks.rows()) {
        check_masks_.push_back(r.mask());
    }
    logical_masks_.clear();
    for (size_t j = 0; j < code.k; j++) {
        const PauliString &l = type == PauliType::X ? code.logical_z[j] : code.logical_x[j];
        logical_masks_.push_back(type == PauliType::X ? l.zs.mask() : l.xs.mask());
    }
}

uint64_t DecoderTable::syndrome(uint64_t error) const {
    uint64_t s = 0;
    for (size_t i = 0; i < check_masks_.size(); i++) {
        s |= static_cast<uint64_t>(std::popcount(error & check_masks_[i]) & 1) << i;
    }
    return s;
}

uint64_t DecoderTable::logical_flips(uint64_t error) const {
    uint64_t s = 0;
    for (size_t j = 0; j < logical_masks_.size(); j++) {
        s |= static_cast<uint64_t>(std::popcount(error & logical_masks_[j]) & 1) << j;
    }
    return s;
}

DecoderTable DecoderTable::build(const StabilizerCode &code, PauliType error_type, std::optional<size_t> weight_cap,
                                 uint64_t budget) {
    DecoderTable t;
    t.init(code, error_type);
    size_t n = t.n_;
    size_t cap = 0;
    uint64_t total = 1;
    if (weight_cap) {
        cap = std::min(*weight_cap, n);
        for (size_t w = 1; w <= cap; w++) {
            total += binomial(n, w);
        }
        if (total > budget) {
            throw BudgetExceeded("build_lookup_table: " + std::to_string(total) + " errors exceed budget " +
                                 std::to_string(budget));
        }
    } else {
        while (cap < n && total + binomial(n, cap + 1) <= budget) {
            cap++;
            total += binomial(n, cap);
        }
    }
    size_t r = t.check_masks_.size();
    BitMatrix checks(0, n);
    for (uint64_t m : t.check_masks_) {
        checks.push_row(BitVec::from_mask(n, m));
    }
    uint64_t reachable = uint64_t{1} << rank(checks);
    t.table_.assign(size_t{1} << r, kReject);
    std::vector<uint8_t> weight(size_t{1} << r, 0xFF);
    // Per-qubit syndrome columns.
    std::vector<uint64_t> column(n, 0);
    for (size_t q = 0; q < n; q++) {
        column[q] = t.syndrome(uint64_t{1} << q);
    }
    uint64_t filled = 0;
    t.weight_cap_ = 0;
    for (size_t w = 0; w <= cap; w++) {
        for_each_subset(n, w, [&](uint64_t e) {
            uint64_t s = 0;
            for (uint64_t m = e; m; m &= m - 1) {
                s ^= column[std::countr_zero(m)];
            }
            if (weight[s] == 0xFF) {
                weight[s] = static_cast<uint8_t>(w);
                t.table_[s] = e;
                filled++;
            } else if (weight[s] == w && t.table_[s] != kReject && t.logical_flips(e ^ t.table_[s])) {
                t.table_[s] = kReject;
            }
        });
        t.weight_cap_ = w;
        if (filled == reachable) {
            break;
        }
    }
    return t;
}

std::optional<BitVec> DecoderTable::decode(const BitVec &syndrome) const {
    if (syndrome.size() != num_checks()) {
        throw std::invalid_argument("decode: syndrome length mismatch");
    }
    uint64_t c = table_[syndrome.mask()];
    if (c == kReject) {
        return std::nullopt;
    }
    return BitVec::from_mask(n_, c);
}

size_t DecoderTable::num_reject_syndromes() const {
    return static_cast<size_t>(std::count(table_.begin(), table_.end(), kReject));
}

void DecoderTable::write_binary(std::ostream &out) const {
    auto put = [&](uint64_t v) { out.write(reinterpret_cast<const char *>(&v), sizeof(v)); };
    out.write(kMagic, sizeof(kMagic));
    put(code_hash_);
    put(type_ == PauliType::X ? 0 : 1);
    put(weight_cap_);
    put(check_masks_.size());
    uint64_t count = table_.size() - num_reject_syndromes();
    put(count);
    for (uint64_t s = 0; s < table_.size(); s++) {
        if (table_[s] != kReject) {
            put(s);
            put(table_[s]);
        }
    }
}

DecoderTable DecoderTable::read_binary(std::istream &in, const StabilizerCode &code) {
    auto get = [&]() {
        uint64_t v = 0;
        if (!in.read(reinterpret_cast<char *>(&v), sizeof(v))) {
            throw std::invalid_argument("read_binary: truncated table");
        }
        return v;
    };
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || !std::equal(magic, magic + 8, kMagic)) {
        throw std::invalid_argument("read_binary: bad magic");
    }
    uint64_t hash = get();
    if (hash != iceberg::code_hash(code)) {
        throw std::invalid_argument("read_binary: table was built for a different code");
    }
    DecoderTable t;
    t.init(code, get() == 0 ? PauliType::X : PauliType::Z);
    t.weight_cap_ = get();
    if (get() != t.check_masks_.size()) {
        throw std::invalid_argument("read_binary: check count mismatch");
    }
    t.table_.assign(size_t{1} << t.check_masks_.size(), kReject);
    uint64_t count = get();
    for (uint64_t i = 0; i < count; i++) {
        uint64_t s = get();
        uint64_t c = get();
        if (s >= t.table_.size()) {
            throw std::invalid_argument("read_binary: syndrome out of range");
        }
        t.table_[s] = c;
    }
    return t;
}

FaultCountReport enumerate_fault_counts(const DecoderTable &table, size_t max_weight, size_t workers) {
    size_t n = table.n();
    max_weight = std::min(max_weight, n);
    FaultCountReport r;
    r.n_logical.assign(max_weight + 1, 0);
    r.n_reject.assign(max_weight + 1, 0);
    r.n_total.assign(max_weight + 1, 0);
    // Shard each weight by its lowest set qubit.
    std::mutex mu;
    for (size_t w = 1; w <= max_weight; w++) {
        parallel_for(n, workers, [&](size_t low) {
            uint64_t logical = 0;
            uint64_t reject = 0;
            uint64_t total = 0;
            size_t rest = n - low - 1;
            for_each_subset(rest, w - 1, [&](uint64_t tail) {
                uint64_t e = (uint64_t{1} << low) | (tail << (low + 1));
                total++;
                uint64_t c = table.decode(table.syndrome(e));
                if (c == DecoderTable::kReject) {
                    reject++;
                } else if (table.logical_flips(e ^ c)) {
                    logical++;
                }
            });
            std::lock_guard<std::mutex> lock(mu);
            r.n_logical[w] += logical;
            r.n_reject[w] += reject;
            r.n_total[w] += total;
        });
    }
    r.n_total[0] = 1;
    return r;
}

FaultCountReport enumerate_fault_counts(const StabilizerCode &code, PauliType type, size_t max_weight) {
    return enumerate_fault_counts(DecoderTable::build(code, type), max_weight);
}

Interval wilson_interval(uint64_t k, uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("wilson_interval: n == 0");
    }
    if (k > n) {
        throw std::invalid_argument("wilson_interval: k > n");
    }
    const double z = 1.959963984540054;
    double nn = static_cast<double>(n);
    double ph = static_cast<double>(k) / nn;
    double denom = 1 + z * z / nn;
    double center = (ph + z * z / (2 * nn)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
    double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = k == n ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

double RatesReport::p_L() const {
    return accepted ? static_cast<double>(logical_errors) / static_cast<double>(accepted) / rounds : 0.0;
}

double RatesReport::p_R() const {
    return shots ? static_cast<double>(rejected()) / static_cast<double>(shots) / rounds : 0.0;
}

Interval RatesReport::p_L_ci() const {
    if (!accepted) {
        return {0.0, 1.0 / rounds};
    }
    Interval i = wilson_interval(logical_errors, accepted);
    return {i.low / rounds, i.high / rounds};
}

Interval RatesReport::p_R_ci() const {
    if (!shots) {
        return {0.0, 1.0 / rounds};
    }
    Interval i = wilson_interval(rejected(), shots);
    return {i.low / rounds, i.high / rounds};
}

void RatesReport::merge(const RatesReport &other) {
    shots += other.shots;
    accepted += other.accepted;
    logical_errors += other.logical_errors;
}

std::string RatesReport::to_json() const {
    nlohmann::ordered_json j;
    j["descriptor"] = descriptor;
    j["p"] = p;
    j["seed"] = seed;
    j["shots"] = shots;
    j["accepted"] = accepted;
    j["rejected"] = rejected();
    j["logical_errors"] = logical_errors;
    j["rounds"] = rounds;
    j["p_L"] = p_L();
    j["p_L_ci"] = {p_L_ci().low, p_L_ci().high};
    j["p_R"] = p_R();
    j["p_R_ci"] = {p_R_ci().low, p_R_ci().high};
    return j.dump(2);
}

std::string RatesReport::csv_header() {
    return "descriptor,p,shots,accepted,rejected,logical_errors,rounds,p_L,p_L_low,p_L_high,p_R,p_R_low,p_R_high,seed";
}

std::string RatesReport::csv_row() const {
    char buf[512];
    Interval l = p_L_ci();
    Interval r = p_R_ci();
    std::snprintf(buf, sizeof(buf), "%.6g,%llu,%llu,%llu,%llu,%llu,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,%llu", p,
                  static_cast<unsigned long long>(shots), static_cast<unsigned long long>(accepted),
                  static_cast<unsigned long long>(rejected()), static_cast<unsigned long long>(logical_errors),
                  static_cast<unsigned long long>(rounds), p_L(), l.low, l.high, p_R(), r.low, r.high,
                  static_cast<unsigned long long>(seed));
    return descriptor + "," + buf;
}

RatesReport code_capacity_sample(const DecoderTable &table, double p, uint64_t shots, uint64_t seed,
                                 size_t workers) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("code_capacity_sample: p outside [0,1]");
    }
    size_t n = table.n();
    uint64_t num_shards = (shots + kShardShots - 1) / kShardShots;
    std::vector<RatesReport> parts(num_shards);
    parallel_for(num_shards, workers, [&](size_t shard) {
        uint64_t begin = shard * kShardShots;
        uint64_t count = std::min(kShardShots, shots - begin);
        std::vector<uint64_t> errors(count, 0);
        if (p > 0) {
            std::mt19937_64 rng(derive_seed(seed, 0, shard));
            std::geometric_distribution<uint64_t> gap(p);
            uint64_t limit = count * n;
            uint64_t pos = gap(rng);
            while (pos < limit) {
                errors[pos / n] |= uint64_t{1} << (pos % n);
                pos += 1 + gap(rng);
            }
        }
        RatesReport &r = parts[shard];
        r.shots = count;
        for (uint64_t e : errors) {
            uint64_t c = table.decode(table.syndrome(e));
            if (c == DecoderTable::kReject) {
                continue;
            }
            r.accepted++;
            if (table.logical_flips(e ^ c)) {
                r.logical_errors++;
            }
        }
    });
    RatesReport out;
    out.descriptor = "code_capacity/" + table.code_name() + "/" + to_string(table.error_type());
    out.seed = seed;
    out.p = p;
    for (const auto &r : parts) {
        out.merge(r);
    }
    return out;
}

double series_reject(const FaultCountReport &r, size_t n, double p) {
    double s = 0;
    for (size_t w = 0; w < r.n_reject.size(); w++) {
        s += r.n_reject[w] * std::pow(p, w) * std::pow(1 - p, n - w);
    }
    return s;
}

double series_logical(const FaultCountReport &r, size_t n, double p) {
    double s = 0;
    for (size_t w = 0; w < r.n_logical.size(); w++) {
        s += r.n_logical[w] * std::pow(p, w) * std::pow(1 - p, n - w);
    }
    return s;
}

}  // namespace iceberg
