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

#include "iceberg/experiments.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "iceberg/code_factory.h"
#include "iceberg/frame_sim.h"
#include "iceberg/parallel.h"

namespace iceberg {

const DecoderTable &catalog_decoder(const std::string &code, PauliType type) {
    static std::mutex mu;
    static std::map<std::pair<std::string, PauliType>, std::unique_ptr<DecoderTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto &slot = cache[{code, type}];
    if (!slot) {
        slot = std::make_unique<DecoderTable>(DecoderTable::build(catalog(code), type));
    }
    return *slot;
}

namespace {

constexpr uint64_t kShard = 4096;

// Pauli frame of one code block plus the logical frame left by decoding.
struct Block {
    uint64_t x = 0;
    uint64_t z = 0;
    uint64_t ax = 0;
    uint64_t az = 0;
};

class Engine {
   public:
    explicit Engine(const EcRunConfig &cfg)
        : n_(catalog(cfg.code).n),
          dec_x_(catalog_decoder(cfg.code, PauliType::X)),
          dec_z_(catalog_decoder(cfg.code, PauliType::Z)),
          zero_(compiled_prep(cfg.code, Basis::Zero, cfg.variant), cfg.p),
          plus_(compiled_prep(cfg.code, Basis::Plus, cfg.variant), cfg.p),
          skip_(cfg.p),
          rounds_(cfg.rounds),
          basis_(cfg.basis) {}

    void sample_mode(std::mt19937_64 *rng, std::vector<ShotFault> *record) {
        rng_ = rng;
        record_ = record;
        replay_ = nullptr;
    }
    void replay_mode(const std::vector<ShotFault> *faults) {
        rng_ = nullptr;
        record_ = nullptr;
        replay_ = faults;
    }

    ShotOutcome repeated_ec() {
        begin();
        Block d = prep(basis_);
        for (uint64_t r = 0; r < rounds_; r++) {
            if (!z_ec(d) || !x_ec(d)) return finish(ShotOutcome::Rejected);
        }
        // Transversal measurement in the prepared basis, then an ideal decode.
        bool bad;
        if (basis_ == Basis::Zero) {
            auto rx = dec_x_.decode_logical(d.x ^ flips());
            if (!rx) return finish(ShotOutcome::Rejected);
            bad = (*rx ^ d.ax) != 0;
        } else {
            auto rz = dec_z_.decode_logical(d.z ^ flips());
            if (!rz) return finish(ShotOutcome::Rejected);
            bad = (*rz ^ d.az) != 0;
        }
        return finish(bad ? ShotOutcome::LogicalError : ShotOutcome::Accepted);
    }

    ShotOutcome transversal_cnot() {
        begin();
        Block a, b;
        if (!z_ec(a) || !x_ec(a) || !z_ec(b) || !x_ec(b)) return finish(ShotOutcome::Rejected);
        for (uint64_t r = 0; r < rounds_; r++) {
            logical_cnot(a, b);
            if (!z_ec(a) || !x_ec(a) || !z_ec(b) || !x_ec(b)) return finish(ShotOutcome::Rejected);
        }
        return finish(final_decode(a, b));
    }

    ShotOutcome teleported_cnot() {
        begin();
        Block c, t;
        for (uint64_t r = 0; r < rounds_; r++) {
            Block a = prep(Basis::Plus);
            Block b = prep(Basis::Zero);
            logical_cnot(a, b);
            // Control half: CNOT a->c, measure c in Z.
            cnot(a, c);
            auto r1 = dec_x_.decode_logical(c.x ^ flips());
            if (!r1) return finish(ShotOutcome::Rejected);
            // Target half: CNOT t->b, measure t in X.
            cnot(t, b);
            auto r2 = dec_z_.decode_logical(t.z ^ flips());
            if (!r2) return finish(ShotOutcome::Rejected);
            uint64_t m1 = *r1 ^ c.ax;
            uint64_t m2 = *r2 ^ t.az;
            a.ax ^= m1;
            b.ax ^= m1 ^ t.ax;
            a.az ^= m2 ^ c.az;
            b.az ^= m2;
            c = a;
            t = b;
            if (!z_ec(c) || !x_ec(t)) return finish(ShotOutcome::Rejected);
        }
        return finish(final_decode(c, t));
    }

    bool invalid() const { return invalid_; }

   private:
    void begin() {
        slot_ = 0;
        pos_ = 0;
        invalid_ = false;
    }
    ShotOutcome finish(ShotOutcome o) const { return invalid_ ? ShotOutcome::Invalid : o; }

    ShotOutcome final_decode(const Block &a, const Block &b) const {
        uint64_t bad = 0;
        for (const Block *blk : {&a, &b}) {
            auto rx = dec_x_.decode_logical(blk->x);
            auto rz = dec_z_.decode_logical(blk->z);
            if (!rx || !rz) return ShotOutcome::Rejected;
            bad |= (*rx ^ blk->ax) | (*rz ^ blk->az);
        }
        return bad ? ShotOutcome::LogicalError : ShotOutcome::Accepted;
    }

    // Faults of the current slot in replay mode.
    template <typename F>
    void replay_slot(uint32_t slot, F &&fn) {
        while (pos_ < replay_->size() && (*replay_)[pos_].slot < slot) pos_++;
        while (pos_ < replay_->size() && (*replay_)[pos_].slot == slot) fn((*replay_)[pos_++]);
    }

    Block prep(Basis basis) {
        const SparseSampler &s = basis == Basis::Zero ? zero_ : plus_;
        uint32_t slot = slot_++;
        Attempt a;
        if (replay_) {
            FaultRecord fr;
            replay_slot(slot, [&](const ShotFault &f) { fr.push_back({f.where, f.choice}); });
            a = s.evaluate(fr);
            if (!a.accepted) invalid_ = true;
        } else if (record_) {
            FaultRecord fr;
            uint64_t attempts = 0;
            a = s.until_accepted(*rng_, attempts, &fr);
            for (const Fault &f : fr) record_->push_back({slot, f.site, f.choice});
        } else {
            uint64_t attempts = 0;
            a = s.until_accepted(*rng_, attempts);
        }
        Block b;
        b.x = a.x;
        b.z = a.z;
        return b;
    }

    void apply_cnot_fault(Block &c, Block &t, uint32_t q, uint8_t choice) {
        TwoQubitPauli f = two_qubit_pauli(choice);
        uint64_t bit = uint64_t{1} << q;
        if (f.x0) c.x ^= bit;
        if (f.z0) c.z ^= bit;
        if (f.x1) t.x ^= bit;
        if (f.z1) t.z ^= bit;
    }

    // Noisy transversal CNOT on the physical frames.
    void cnot(Block &c, Block &t) {
        t.x ^= c.x;
        c.z ^= t.z;
        uint32_t slot = slot_++;
        if (replay_) {
            replay_slot(slot, [&](const ShotFault &f) { apply_cnot_fault(c, t, f.where, f.choice); });
            return;
        }
        for (uint64_t q = skip_.skip(*rng_); q < n_; q += 1 + skip_.skip(*rng_)) {
            uint8_t ch = uniform_choice(*rng_, 15);
            apply_cnot_fault(c, t, static_cast<uint32_t>(q), ch);
            if (record_) record_->push_back({slot, static_cast<uint32_t>(q), ch});
        }
    }

    // Transversal CNOT between two data blocks, logical frames included.
    void logical_cnot(Block &c, Block &t) {
        cnot(c, t);
        t.ax ^= c.ax;
        c.az ^= t.az;
    }

    uint64_t flips() {
        uint32_t slot = slot_++;
        uint64_t m = 0;
        if (replay_) {
            replay_slot(slot, [&](const ShotFault &f) { m ^= uint64_t{1} << f.where; });
            return m;
        }
        for (uint64_t q = skip_.skip(*rng_); q < n_; q += 1 + skip_.skip(*rng_)) {
            m ^= uint64_t{1} << q;
            if (record_) record_->push_back({slot, static_cast<uint32_t>(q), 0});
        }
        return m;
    }

    // Teleport through a fresh |0^k>; data measured in X.
    bool z_ec(Block &d) {
        Block m = prep(Basis::Zero);
        cnot(d, m);
        auto r = dec_z_.decode_logical(d.z ^ flips());
        if (!r) return false;
        m.ax ^= d.ax;
        m.az ^= d.az ^ *r;
        d = m;
        return true;
    }

    // Teleport through a fresh |+^k>; data measured in Z.
    bool x_ec(Block &d) {
        Block o = prep(Basis::Plus);
        cnot(o, d);
        auto r = dec_x_.decode_logical(d.x ^ flips());
        if (!r) return false;
        o.ax ^= d.ax ^ *r;
        o.az ^= d.az;
        d = o;
        return true;
    }

    size_t n_;
    const DecoderTable &dec_x_;
    const DecoderTable &dec_z_;
    SparseSampler zero_;
    SparseSampler plus_;
    GeometricSkipper skip_;
    uint64_t rounds_;
    Basis basis_;
    std::mt19937_64 *rng_ = nullptr;
    std::vector<ShotFault> *record_ = nullptr;
    const std::vector<ShotFault> *replay_ = nullptr;
    uint32_t slot_ = 0;
    size_t pos_ = 0;
    bool invalid_ = false;
};

using ShotFn = ShotOutcome (Engine::*)();

RatesReport run_rates(const EcRunConfig &cfg, ShotFn fn, const std::string &what) {
    if (cfg.rounds == 0) throw std::invalid_argument("rounds must be positive");
    // Build shared caches before the workers start.
    Engine probe(cfg);
    (void)probe;
    uint64_t shards = (cfg.shots + kShard - 1) / kShard;
    std::vector<RatesReport> parts(shards);
    parallel_for(shards, cfg.workers, [&](size_t s) {
        Engine eng(cfg);
        std::mt19937_64 rng(derive_seed(cfg.seed, 0, s));
        eng.sample_mode(&rng, nullptr);
        uint64_t count = std::min<uint64_t>(kShard, cfg.shots - s * kShard);
        RatesReport &r = parts[s];
        r.rounds = cfg.rounds;
        r.shots = count;
        for (uint64_t i = 0; i < count; i++) {
            ShotOutcome o = (eng.*fn)();
            if (o != ShotOutcome::Rejected) r.accepted++;
            if (o == ShotOutcome::LogicalError) r.logical_errors++;
        }
    });
    RatesReport total;
    total.descriptor = what + ":" + cfg.code + ":" + to_string(cfg.variant);
    total.seed = cfg.seed;
    total.rounds = cfg.rounds;
    total.p = cfg.p;
    for (const auto &r : parts) {
        total.shots += r.shots;
        total.accepted += r.accepted;
        total.logical_errors += r.logical_errors;
    }
    return total;
}

}  // namespace

RatesReport run_repeated_ec(const EcRunConfig &cfg) {
    return run_rates(cfg, &Engine::repeated_ec, cfg.basis == Basis::Zero ? "repeated_ec" : "repeated_ec_plus");
}
RatesReport run_transversal_cnot(const EcRunConfig &cfg) {
    return run_rates(cfg, &Engine::transversal_cnot, "transversal_cnot");
}
RatesReport run_teleported_cnot(const EcRunConfig &cfg) {
    return run_rates(cfg, &Engine::teleported_cnot, "teleported_cnot");
}

ShotOutcome replay_repeated_ec(const EcRunConfig &cfg, const std::vector<ShotFault> &faults) {
    std::vector<ShotFault> sorted = faults;
    std::sort(sorted.begin(), sorted.end());
    Engine eng(cfg);
    eng.replay_mode(&sorted);
    return eng.repeated_ec();
}

// --- fault-order histogram ------------------------------------------------

std::vector<RecordedShot> sample_recorded_shots(const EcRunConfig &cfg, bool failures_only) {
    Engine eng(cfg);
    std::mt19937_64 rng(derive_seed(cfg.seed, 3, 0));
    std::vector<ShotFault> rec;
    eng.sample_mode(&rng, &rec);
    std::vector<RecordedShot> out;
    for (uint64_t i = 0; i < cfg.shots; i++) {
        rec.clear();
        ShotOutcome o = eng.repeated_ec();
        if (failures_only && o == ShotOutcome::Accepted) continue;
        out.push_back({o, rec});
    }
    return out;
}

std::vector<ShotFault> minimal_fault_subset(const EcRunConfig &cfg, const std::vector<ShotFault> &faults,
                                            ShotOutcome target, bool *exhaustive) {
    std::vector<ShotFault> sorted = faults;
    std::sort(sorted.begin(), sorted.end());
    Engine eng(cfg);
    std::vector<ShotFault> trial;
    auto reproduces = [&](const std::vector<ShotFault> &fs) {
        eng.replay_mode(&fs);
        return eng.repeated_ec() == target;
    };
    size_t m = sorted.size();
    if (m <= 12) {
        if (exhaustive) *exhaustive = true;
        for (size_t size = 1; size <= m; size++) {
            // Lexicographic walk over all size-subsets.
            std::vector<size_t> idx(size);
            std::iota(idx.begin(), idx.end(), 0);
            for (;;) {
                trial.clear();
                for (size_t i : idx) trial.push_back(sorted[i]);
                if (reproduces(trial)) return trial;
                size_t i = size;
                while (i > 0 && idx[i - 1] == m - size + (i - 1)) i--;
                if (i == 0) break;
                idx[i - 1]++;
                for (size_t j = i; j < size; j++) idx[j] = idx[j - 1] + 1;
            }
        }
        return sorted;
    }
    if (exhaustive) *exhaustive = false;
    std::vector<ShotFault> cur = sorted;
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < cur.size(); i++) {
            trial = cur;
            trial.erase(trial.begin() + i);
            if (reproduces(trial)) {
                cur = trial;
                changed = true;
                break;
            }
        }
    }
    return cur;
}

FaultOrderHistogram fault_order_histogram(const EcRunConfig &cfg) {
    Engine probe(cfg);
    (void)probe;
    uint64_t shards = (cfg.shots + kShard - 1) / kShard;
    std::vector<FaultOrderHistogram> parts(shards);
    parallel_for(shards, cfg.workers, [&](size_t s) {
        Engine eng(cfg);
        std::mt19937_64 rng(derive_seed(cfg.seed, 1, s));
        std::vector<ShotFault> rec;
        eng.sample_mode(&rng, &rec);
        uint64_t count = std::min<uint64_t>(kShard, cfg.shots - s * kShard);
        FaultOrderHistogram &h = parts[s];
        for (uint64_t i = 0; i < count; i++) {
            rec.clear();
            ShotOutcome o = eng.repeated_ec();
            if (o != ShotOutcome::LogicalError && o != ShotOutcome::Rejected) continue;
            bool exhaustive = true;
            size_t order = minimal_fault_subset(cfg, rec, o, &exhaustive).size();
            if (!exhaustive) h.greedy++;
            if (o == ShotOutcome::LogicalError) {
                h.logical_shots++;
                h.logical[order]++;
            } else {
                h.rejected_shots++;
                h.rejection[order]++;
            }
        }
    });
    FaultOrderHistogram total;
    total.p = cfg.p;
    total.samples = cfg.shots;
    for (const auto &h : parts) {
        total.logical_shots += h.logical_shots;
        total.rejected_shots += h.rejected_shots;
        total.greedy += h.greedy;
        for (auto [k, v] : h.logical) total.logical[k] += v;
        for (auto [k, v] : h.rejection) total.rejection[k] += v;
    }
    return total;
}

std::string FaultOrderHistogram::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["samples"] = samples;
    j["logical_shots"] = logical_shots;
    j["rejected_shots"] = rejected_shots;
    j["greedy"] = greedy;
    nlohmann::json lo = nlohmann::json::object(), re = nlohmann::json::object();
    for (auto [k, v] : logical) lo[std::to_string(k)] = v;
    for (auto [k, v] : rejection) re[std::to_string(k)] = v;
    j["logical"] = lo;
    j["rejection"] = re;
    return j.dump();
}

// --- ancilla factories ----------------------------------------------------

namespace {

struct AcceptanceCount {
    uint64_t attempts = 0;
    uint64_t accepted = 0;
    double rate() const { return attempts ? double(accepted) / double(attempts) : 1.0; }
};

AcceptanceCount sample_acceptance(const CompiledCircuit &cc, double p, uint64_t shots, uint64_t seed,
                                  size_t workers) {
    SparseSampler s(cc, p);
    uint64_t shards = (shots + kShard - 1) / kShard;
    std::vector<uint64_t> acc(shards, 0);
    parallel_for(shards, workers, [&](size_t sh) {
        std::mt19937_64 rng(derive_seed(seed, 2, sh));
        uint64_t count = std::min<uint64_t>(kShard, shots - sh * kShard);
        for (uint64_t i = 0; i < count; i++) acc[sh] += s.attempt(rng).accepted;
    });
    AcceptanceCount a;
    a.attempts = shots;
    a.accepted = std::accumulate(acc.begin(), acc.end(), uint64_t{0});
    return a;
}

// Second stage of a tower: outer block CNOTs and verification on inner
// blocks that arrive with the Pauli frames of accepted inner preps. Those
// frames enter through a noiseless H-H pair on every block qubit, whose
// one-qubit fault sites carry the injected Paulis.
struct SecondStage {
    Circuit circuit;
    std::vector<uint32_t> inject_site_x;  // site index per qubit of each code block
    std::vector<Basis> inner_basis;       // per inner block, in qubit order
    size_t inner_n = 0;
    std::string inner;
};

SecondStage second_stage(const std::string &name, Basis basis, VerifyVariant variant) {
    auto bs = block_structure(name);
    if (!bs || !is_tower(name)) throw std::invalid_argument("two-stage factory needs a tower code");
    const EncoderRecipe &enc = catalog_encoder(name, basis);
    SecondStage st;
    st.inner = bs->inner;
    st.inner_n = catalog(bs->inner).n;
    uint32_t n = static_cast<uint32_t>(catalog(name).n);
    size_t nb = n / st.inner_n;
    EncoderRecipe outer;
    outer.code = name;
    outer.basis = basis;
    outer.block_mode = true;
    outer.circuit.add_register("q", n);
    outer.circuit.add_register("aux", 0);
    for (uint32_t q = 0; q < n; q++) outer.circuit.h(q);
    for (uint32_t q = 0; q < n; q++) outer.circuit.h(q);
    for (const auto &r : enc.rounds) {
        for (uint32_t q = 0; q < st.inner_n; q++) {
            outer.circuit.cnot(static_cast<uint32_t>(r.control_block * st.inner_n + q),
                               static_cast<uint32_t>(r.target_block * st.inner_n + r.perm[q]));
        }
    }
    std::vector<bool> is_pivot(nb, false);
    for (uint32_t p : enc.pivots) is_pivot[p] = true;
    PrepRecipe pr = attach_verification(catalog(name), outer, variant);
    st.circuit = pr.circuit;
    size_t blocks = st.circuit.num_qubits() / n;
    for (size_t b = 0; b < blocks; b++) {
        for (size_t i = 0; i < nb; i++) st.inner_basis.push_back(is_pivot[i] ? Basis::Plus : Basis::Zero);
    }
    return st;
}

}  // namespace

OverheadReport factory_overhead(const std::string &code, double p, bool two_stage, uint64_t shots, uint64_t seed,
                                VerifyVariant variant, Basis basis, size_t workers) {
    OverheadReport rep;
    rep.code = code;
    rep.p = p;
    rep.two_stage = two_stage;
    if (!two_stage) {
        const CompiledCircuit &cc = compiled_prep(code, basis, variant);
        AcceptanceCount a = sample_acceptance(cc, p, shots, seed, workers);
        if (a.accepted == 0) throw std::runtime_error("factory_overhead: no accepted attempt");
        rep.acceptance = {a.rate()};
        rep.cnots_per_attempt = cc.num_cnots();
        rep.expected_cnots = double(cc.num_cnots()) / a.rate();
        return rep;
    }
    SecondStage st = second_stage(code, basis, variant);
    // Stage one: inner factories.
    double inner_cost = 0;
    std::map<Basis, double> cost_of;
    double min_inner_acc = 1;
    for (Basis b : {Basis::Zero, Basis::Plus}) {
        const CompiledCircuit &cc = compiled_prep(st.inner, b, VerifyVariant::Heavy);
        AcceptanceCount a = sample_acceptance(cc, p, shots, derive_seed(seed, 3, b == Basis::Plus), workers);
        if (a.accepted == 0) throw std::runtime_error("factory_overhead: no accepted inner attempt");
        cost_of[b] = double(cc.num_cnots()) / a.rate();
        min_inner_acc = std::min(min_inner_acc, a.rate());
        rep.acceptance.push_back(a.rate());
    }
    for (Basis b : st.inner_basis) inner_cost += cost_of[b];

    // Stage two, conditioned on accepted inner blocks.
    NoiseModel noise;
    noise.one_qubit_gate = true;
    uint32_t total_q = st.circuit.num_qubits();
    std::vector<uint32_t> out(catalog(code).n);
    std::iota(out.begin(), out.end(), 0);
    CompiledCircuit cc(st.circuit, noise, out);
    // The second H on each qubit is its injection point; other H sites stay noiseless.
    std::vector<int> inject(total_q, -1);
    std::vector<uint32_t> noisy;
    {
        std::vector<int> seen(total_q, 0);
        for (uint32_t s = 0; s < cc.sites().size(); s++) {
            const FaultSite &fs = cc.sites()[s];
            if (fs.kind == SiteKind::ONE_QUBIT) {
                if (++seen[fs.q0] == 2) inject[fs.q0] = static_cast<int>(s);
            } else {
                noisy.push_back(s);
            }
        }
    }
    SparseSampler zero_s(compiled_prep(st.inner, Basis::Zero), p);
    SparseSampler plus_s(compiled_prep(st.inner, Basis::Plus), p);
    GeometricSkipper skip(p);
    size_t dw = cc.detector_words();
    uint64_t shards = (shots + kShard - 1) / kShard;
    std::vector<uint64_t> acc(shards, 0);
    parallel_for(shards, workers, [&](size_t sh) {
        std::mt19937_64 rng(derive_seed(seed, 4, sh));
        std::vector<uint64_t> det(dw);
        uint64_t count = std::min<uint64_t>(kShard, shots - sh * kShard);
        for (uint64_t i = 0; i < count; i++) {
            std::fill(det.begin(), det.end(), 0);
            auto add = [&](uint32_t site, uint8_t choice) {
                const uint64_t *e = cc.effect(site, choice);
                for (size_t w = 0; w < dw; w++) det[w] ^= e[w];
            };
            for (size_t blk = 0; blk < st.inner_basis.size(); blk++) {
                uint64_t attempts = 0;
                Attempt a = (st.inner_basis[blk] == Basis::Zero ? zero_s : plus_s).until_accepted(rng, attempts);
                for (uint32_t q = 0; q < st.inner_n; q++) {
                    bool x = (a.x >> q) & 1, z = (a.z >> q) & 1;
                    if (!x && !z) continue;
                    // one-qubit choices: 0 = X, 1 = Z, 2 = Y
                    add(static_cast<uint32_t>(inject[blk * st.inner_n + q]), x && z ? 2 : (x ? 0 : 1));
                }
            }
            for (uint64_t j = skip.skip(rng); j < noisy.size(); j += 1 + skip.skip(rng)) {
                uint32_t s = noisy[j];
                add(s, uniform_choice(rng, cc.sites()[s].choices));
            }
            acc[sh] += std::all_of(det.begin(), det.end(), [](uint64_t w) { return w == 0; });
        }
    });
    double a2 = double(std::accumulate(acc.begin(), acc.end(), uint64_t{0})) / double(shots);
    if (a2 == 0) throw std::runtime_error("factory_overhead: no accepted second stage");
    rep.acceptance.push_back(a2);
    rep.cnots_per_attempt = cc.num_cnots();
    rep.expected_cnots = (inner_cost + double(cc.num_cnots())) / a2;
    return rep;
}

std::string OverheadReport::to_json() const {
    nlohmann::json j;
    j["code"] = code;
    j["p"] = p;
    j["mode"] = two_stage ? "two-stage" : "one-stage";
    j["acceptance"] = acceptance;
    j["expected_cnots"] = expected_cnots;
    j["cnots_per_attempt"] = cnots_per_attempt;
    return j.dump();
}

// --- closed forms ---------------------------------------------------------

double postselection_budget(double pL_star, double acceptance_floor) {
    if (!(pL_star > 0 && pL_star < 1) || !(acceptance_floor > 0 && acceptance_floor < 1)) {
        throw std::domain_error("postselection_budget: arguments must lie in (0, 1)");
    }
    return -std::log(acceptance_floor) / pL_star;
}

double max_operations(double pL_star, double acceptance_floor, double p_L, double p_R) {
    postselection_budget(pL_star, acceptance_floor);
    if (p_L < 0 || p_R < 0) throw std::domain_error("max_operations: negative rate");
    double by_error = p_L > 0 ? pL_star / p_L : INFINITY;
    double by_accept = p_R > 0 ? -std::log(acceptance_floor) / p_R : INFINITY;
    return std::min(by_error, by_accept);
}

double steady_state_estimate(double r0, double r_plus, double r_cnot, double r_meas, EcStyle style) {
    if (r0 < 0 || r_plus < 0 || r_cnot < 0 || r_meas < 0) {
        throw std::domain_error("steady_state_estimate: negative rate");
    }
    if (style == EcStyle::Steane) return r0 + 2 * r_plus + 3 * r_cnot + r_meas;
    return r0 + r_cnot + r_meas;
}

SeriesCoefficients exact_series_check(const std::string &code, size_t max_weight, size_t workers) {
    const StabilizerCode &c = catalog(code);
    size_t d = c.d_known.value_or(2);
    SeriesCoefficients s;
    s.reject_weight = d / 2;
    s.logical_weight = d / 2 + 1;
    s.counts = enumerate_fault_counts(catalog_decoder(code, PauliType::X), max_weight, workers);
    if (s.logical_weight < s.counts.n_logical.size()) s.logical = s.counts.n_logical[s.logical_weight];
    if (s.reject_weight < s.counts.n_reject.size()) s.reject = s.counts.n_reject[s.reject_weight];
    return s;
}

// --- spec files -----------------------------------------------------------

const char *to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::RepeatedEC:
            return "repeated_ec";
        case ExperimentKind::TransversalCNOT:
            return "transversal_cnot";
        case ExperimentKind::TeleportedCNOT:
            return "teleported_cnot";
        case ExperimentKind::CodeCapacity:
            return "code_capacity";
        case ExperimentKind::FactoryOverhead:
            return "factory_overhead";
        case ExperimentKind::FaultHistogram:
            return "fault_histogram";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(const std::string &s) {
    // "RepeatedEC", "repeated_ec" and "repeated-ec" all name the same kind.
    auto fold = [](const std::string &t) {
        std::string out;
        for (char c : t) {
            if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        return out;
    };
    for (ExperimentKind k : {ExperimentKind::RepeatedEC, ExperimentKind::TransversalCNOT,
                             ExperimentKind::TeleportedCNOT, ExperimentKind::CodeCapacity,
                             ExperimentKind::FactoryOverhead, ExperimentKind::FaultHistogram}) {
        if (fold(s) == fold(to_string(k))) return k;
    }
    throw SpecError("unknown experiment kind '" + s + "'");
}

void ExperimentSpec::validate() const {
    if (rounds < 1) throw SpecError("rounds must be at least 1");
    if (shots < 1) throw SpecError("shots must be at least 1");
    if (p.empty()) throw SpecError("empty p grid");
    for (double v : p) {
        if (!(v >= 0 && v <= 1)) throw SpecError("p outside [0, 1]");
    }
    try {
        catalog(code);
    } catch (const std::out_of_range &) {
        throw SpecError("unknown code '" + code + "'");
    }
    if (decoder != "lookup" && decoder != "correlated") throw SpecError("decoder must be lookup or correlated");
    if (decoder == "correlated") throw SpecError("correlated decoder needs a user-supplied table; none is shipped");
}

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string &s) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw SpecError("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error &) {
        throw SpecError("bad number '" + s + "'");
    }
}

uint64_t parse_u64(const std::string &s) {
    double v = parse_double(s);
    if (v < 0 || v != std::floor(v)) throw SpecError("bad count '" + s + "'");
    return static_cast<uint64_t>(v);
}

VerifyVariant parse_variant(const std::string &s) {
    if (s == "heavy") return VerifyVariant::Heavy;
    if (s == "light") return VerifyVariant::Light;
    if (s == "none") return VerifyVariant::None;
    throw SpecError("bad variant '" + s + "'");
}

void set_field(ExperimentSpec &spec, const std::string &key, const std::string &value) {
    if (key == "kind") {
        spec.kind = parse_experiment_kind(value);
    } else if (key == "code") {
        spec.code = value;
    } else if (key == "p") {
        spec.p.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) spec.p.push_back(parse_double(trim(item)));
    } else if (key == "rounds") {
        spec.rounds = parse_u64(value);
    } else if (key == "shots") {
        spec.shots = parse_u64(value);
    } else if (key == "seed") {
        spec.seed = parse_u64(value);
    } else if (key == "decoder") {
        spec.decoder = value;
    } else if (key == "factory") {
        if (value != "one-stage" && value != "two-stage") throw SpecError("factory must be one-stage or two-stage");
        spec.two_stage = value == "two-stage";
    } else if (key == "variant") {
        spec.variant = parse_variant(value);
    } else if (key == "basis") {
        if (value != "zero" && value != "plus") throw SpecError("basis must be zero or plus");
        spec.basis = value == "zero" ? Basis::Zero : Basis::Plus;
    } else if (key == "label") {
        spec.label = value;
    } else {
        throw SpecError("unknown key '" + key + "'");
    }
}

ExperimentSpec spec_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw SpecError("spec entries must be objects");
    ExperimentSpec s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto &v = it.value();
        if (it.key() == "p" && v.is_array()) {
            s.p.clear();
            for (const auto &x : v) s.p.push_back(x.get<double>());
        } else if (v.is_string()) {
            set_field(s, it.key(), v.get<std::string>());
        } else if (v.is_boolean()) {
            set_field(s, it.key(), v.get<bool>() ? "true" : "false");
        } else if (v.is_number()) {
            std::ostringstream os;
            os.precision(17);
            os << v.get<double>();
            set_field(s, it.key(), os.str());
        } else {
            throw SpecError("bad value for '" + it.key() + "'");
        }
    }
    return s;
}

}  // namespace

std::vector<ExperimentSpec> parse_specs(const std::string &text) {
    std::vector<ExperimentSpec> out;
    std::string t = trim(text);
    if (!t.empty() && (t[0] == '{' || t[0] == '[')) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception &e) {
            throw SpecError(std::string("bad JSON: ") + e.what());
        }
        if (j.is_array()) {
            for (const auto &e : j) out.push_back(spec_from_json(e));
        } else {
            out.push_back(spec_from_json(j));
        }
    } else {
        std::stringstream ss(text);
        std::string line;
        bool open = false;
        int lineno = 0;
        while (std::getline(ss, line)) {
            lineno++;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                out.emplace_back();
                out.back().label = trim(line.substr(1, line.size() - 2));
                open = true;
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos) throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
            if (!open) {
                out.emplace_back();
                open = true;
            }
            set_field(out.back(), trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    if (out.empty()) throw SpecError("no experiments in spec");
    for (const auto &s : out) s.validate();
    return out;
}

std::string recipe_hash(const ExperimentSpec &spec) {
    std::string text = to_text(catalog(spec.code));
    if (spec.kind != ExperimentKind::CodeCapacity) {
        for (Basis b : {Basis::Zero, Basis::Plus}) text += catalog_prep(spec.code, b, spec.variant).serialize();
    }
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentResult run_experiment(const ExperimentSpec &spec, size_t workers) {
    spec.validate();
    ExperimentResult res;
    for (size_t i = 0; i < spec.p.size(); i++) {
        EcRunConfig cfg;
        cfg.code = spec.code;
        cfg.p = spec.p[i];
        cfg.rounds = spec.rounds;
        cfg.shots = spec.shots;
        cfg.seed = derive_seed(spec.seed, 100 + i, 0);
        cfg.workers = workers;
        cfg.variant = spec.variant;
        cfg.basis = spec.basis;
        switch (spec.kind) {
            case ExperimentKind::RepeatedEC:
                res.rates.push_back(run_repeated_ec(cfg));
                break;
            case ExperimentKind::TransversalCNOT:
                res.rates.push_back(run_transversal_cnot(cfg));
                break;
            case ExperimentKind::TeleportedCNOT:
                res.rates.push_back(run_teleported_cnot(cfg));
                break;
            case ExperimentKind::CodeCapacity: {
                RatesReport r = code_capacity_sample(catalog_decoder(spec.code, PauliType::X), cfg.p, cfg.shots,
                                                     cfg.seed, workers);
                res.rates.push_back(r);
                break;
            }
            case ExperimentKind::FactoryOverhead:
                res.overheads.push_back(
                    factory_overhead(spec.code, cfg.p, spec.two_stage, cfg.shots, cfg.seed, spec.variant, Basis::Zero, workers));
                break;
            case ExperimentKind::FaultHistogram:
                res.histograms.push_back(fault_order_histogram(cfg));
                break;
        }
    }
    return res;
}

}  // namespace iceberg
