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

#include "iceberg/frame_sim.h"

#include <algorithm>
#include <stdexcept>

namespace iceberg {

namespace {

struct Planes {
    size_t words = 0;
    std::vector<uint64_t> x, z, flips, det, aborted;
    Planes(const Circuit &c, size_t w)
        : words(w),
          x(c.num_qubits() * w, 0),
          z(c.num_qubits() * w, 0),
          flips(c.num_measurements() * w, 0),
          det(c.num_abort_checks() * w, 0),
          aborted(w, 0) {}
};

void inject(const Circuit &c, const FaultSite &s, Planes &pl, size_t lane, uint8_t choice) {
    size_t w = lane / 64;
    uint64_t bit = uint64_t{1} << (lane % 64);
    size_t W = pl.words;
    switch (s.kind) {
        case SiteKind::CNOT: {
            TwoQubitPauli p = two_qubit_pauli(choice);
            if (p.x0) pl.x[s.q0 * W + w] ^= bit;
            if (p.z0) pl.z[s.q0 * W + w] ^= bit;
            if (p.x1) pl.x[s.q1 * W + w] ^= bit;
            if (p.z1) pl.z[s.q1 * W + w] ^= bit;
            break;
        }
        case SiteKind::MEASURE:
            pl.flips[c.timesteps()[s.timestep][s.gate].measurement * W + w] ^= bit;
            break;
        case SiteKind::PREP:
            if (c.timesteps()[s.timestep][s.gate].type == GateType::PZ) {
                pl.x[s.q0 * W + w] ^= bit;
            } else {
                pl.z[s.q0 * W + w] ^= bit;
            }
            break;
        case SiteKind::ONE_QUBIT:
        case SiteKind::IDLE: {
            auto [px, pz] = one_qubit_pauli(choice);
            if (px) pl.x[s.q0 * W + w] ^= bit;
            if (pz) pl.z[s.q0 * W + w] ^= bit;
            break;
        }
    }
}

// Propagates frames through the circuit. `fire(site_index, site)` is called
// after the gates of the site's timestep and injects faults into the planes.
template <class Fire>
void run_frames(const Circuit &c, const std::vector<FaultSite> &sites, Planes &pl, Fire &&fire) {
    size_t W = pl.words;
    size_t next_site = 0;
    size_t next_det = 0;
    std::vector<uint64_t> tmp;
    for (uint32_t t = 0; t < c.timesteps().size(); t++) {
        for (const Gate &g : c.timesteps()[t]) {
            switch (g.type) {
                case GateType::PZ:
                case GateType::PX:
                    std::fill_n(&pl.x[g.targets[0] * W], W, 0);
                    std::fill_n(&pl.z[g.targets[0] * W], W, 0);
                    break;
                case GateType::H:
                    std::swap_ranges(&pl.x[g.targets[0] * W], &pl.x[g.targets[0] * W] + W, &pl.z[g.targets[0] * W]);
                    break;
                case GateType::CNOT: {
                    uint64_t *xc = &pl.x[g.targets[0] * W], *xt = &pl.x[g.targets[1] * W];
                    uint64_t *zc = &pl.z[g.targets[0] * W], *zt = &pl.z[g.targets[1] * W];
                    for (size_t k = 0; k < W; k++) {
                        xt[k] ^= xc[k];
                        zc[k] ^= zt[k];
                    }
                    break;
                }
                case GateType::MZ:
                case GateType::MX: {
                    const uint64_t *src = g.type == GateType::MZ ? &pl.x[g.targets[0] * W] : &pl.z[g.targets[0] * W];
                    uint64_t *dst = &pl.flips[g.measurement * W];
                    for (size_t k = 0; k < W; k++) {
                        dst[k] ^= src[k];
                    }
                    break;
                }
                case GateType::PERM: {
                    const Register &r = c.registers()[g.reg];
                    for (auto *plane : {&pl.x, &pl.z}) {
                        tmp.assign(plane->begin() + r.offset * W, plane->begin() + (r.offset + r.size) * W);
                        for (uint32_t i = 0; i < r.size; i++) {
                            std::copy_n(&tmp[i * W], W, &(*plane)[(r.offset + g.targets[i]) * W]);
                        }
                    }
                    break;
                }
                case GateType::ABORTIF: {
                    uint64_t *d = &pl.det[next_det * W];
                    for (uint32_t m : g.targets) {
                        for (size_t k = 0; k < W; k++) {
                            d[k] ^= pl.flips[m * W + k];
                        }
                    }
                    for (size_t k = 0; k < W; k++) {
                        pl.aborted[k] |= d[k];
                    }
                    next_det++;
                    break;
                }
            }
        }
        while (next_site < sites.size() && sites[next_site].timestep == t) {
            fire(next_site, sites[next_site]);
            next_site++;
        }
    }
}

FrameBatch to_batch(Planes &&pl, size_t shots) {
    FrameBatch b;
    b.shots = shots;
    b.words = pl.words;
    b.x = std::move(pl.x);
    b.z = std::move(pl.z);
    b.flips = std::move(pl.flips);
    b.aborted = std::move(pl.aborted);
    return b;
}

}  // namespace

FrameBatch sample_frames(const Circuit &circuit, const NoiseModel &noise, size_t shots, uint64_t seed,
                         bool record_faults) {
    std::vector<FaultSite> sites = fault_sites(circuit, noise);
    Planes pl(circuit, (shots + 63) / 64);
    std::mt19937_64 rng(seed);
    GeometricSkipper skip(noise.p);
    std::vector<FaultRecord> records(record_faults ? shots : 0);
    run_frames(circuit, sites, pl, [&](size_t si, const FaultSite &s) {
        for (uint64_t lane = skip.skip(rng); lane < shots; lane += 1 + skip.skip(rng)) {
            if ((pl.aborted[lane / 64] >> (lane % 64)) & 1) {
                continue;
            }
            uint8_t choice = uniform_choice(rng, s.choices);
            inject(circuit, s, pl, lane, choice);
            if (record_faults) {
                records[lane].push_back({static_cast<uint32_t>(si), choice});
            }
        }
    });
    FrameBatch b = to_batch(std::move(pl), shots);
    b.records = std::move(records);
    return b;
}

FrameBatch replay_faults(const Circuit &circuit, const NoiseModel &noise, const FaultRecord &faults) {
    std::vector<FaultSite> sites = fault_sites(circuit, noise);
    for (const Fault &f : faults) {
        if (f.site >= sites.size() || f.choice >= sites[f.site].choices) {
            throw std::invalid_argument("replay_faults: fault out of range");
        }
    }
    Planes pl(circuit, 1);
    run_frames(circuit, sites, pl, [&](size_t si, const FaultSite &s) {
        if (pl.aborted[0] & 1) {
            return;
        }
        for (const Fault &f : faults) {
            if (f.site == si) {
                inject(circuit, s, pl, 0, f.choice);
            }
        }
    });
    FrameBatch b = to_batch(std::move(pl), 1);
    b.records = {faults};
    return b;
}

CompiledCircuit::CompiledCircuit(const Circuit &circuit, const NoiseModel &noise, std::vector<uint32_t> output_qubits)
    : sites_(fault_sites(circuit, noise)), outputs_(std::move(output_qubits)) {
    if (outputs_.size() > 64) {
        throw std::invalid_argument("CompiledCircuit: at most 64 output qubits");
    }
    for (uint32_t q : outputs_) {
        if (q >= circuit.num_qubits()) {
            throw std::invalid_argument("CompiledCircuit: output qubit out of range");
        }
    }
    num_detectors_ = circuit.num_abort_checks();
    det_words_ = (num_detectors_ + 63) / 64;
    num_cnots_ = circuit.num_gates(GateType::CNOT);
    num_measurements_ = circuit.num_measurements();

    // One lane per basis fault: X/Z on each touched qubit, or the single flip.
    struct Basis {
        uint32_t site;
        uint8_t choice;
    };
    std::vector<Basis> basis;
    std::vector<uint32_t> first_basis(sites_.size());
    for (uint32_t s = 0; s < sites_.size(); s++) {
        first_basis[s] = static_cast<uint32_t>(basis.size());
        switch (sites_[s].choices) {
            case 15:
                for (uint8_t e : {1, 2, 4, 8}) {
                    basis.push_back({s, uint8_t(e - 1)});
                }
                break;
            case 3:
                basis.push_back({s, 0});
                basis.push_back({s, 1});
                break;
            default:
                basis.push_back({s, 0});
        }
    }
    size_t lanes = basis.size();
    Planes pl(circuit, std::max<size_t>(1, (lanes + 63) / 64));
    size_t W = pl.words;
    run_frames(circuit, sites_, pl, [&](size_t si, const FaultSite &s) {
        size_t b0 = first_basis[si];
        size_t b1 = si + 1 < sites_.size() ? first_basis[si + 1] : lanes;
        for (size_t lane = b0; lane < b1; lane++) {
            inject(circuit, s, pl, lane, basis[lane].choice);
        }
    });

    size_t st = stride();
    std::vector<uint64_t> basis_effect(lanes * st, 0);
    for (size_t lane = 0; lane < lanes; lane++) {
        uint64_t *row = &basis_effect[lane * st];
        size_t w = lane / 64;
        int b = lane % 64;
        for (size_t d = 0; d < num_detectors_; d++) {
            if ((pl.det[d * W + w] >> b) & 1) {
                row[d / 64] |= uint64_t{1} << (d % 64);
            }
        }
        for (size_t i = 0; i < outputs_.size(); i++) {
            if ((pl.x[outputs_[i] * W + w] >> b) & 1) {
                row[det_words_] |= uint64_t{1} << i;
            }
            if ((pl.z[outputs_[i] * W + w] >> b) & 1) {
                row[det_words_ + 1] |= uint64_t{1} << i;
            }
        }
    }

    site_offset_.resize(sites_.size());
    uint32_t rows = 0;
    for (uint32_t s = 0; s < sites_.size(); s++) {
        site_offset_[s] = rows;
        rows += sites_[s].choices;
    }
    effects_.assign(size_t(rows) * st, 0);
    for (uint32_t s = 0; s < sites_.size(); s++) {
        for (uint8_t c = 0; c < sites_[s].choices; c++) {
            uint64_t *row = &effects_[(site_offset_[s] + c) * st];
            uint8_t v = c + 1;
            if (sites_[s].choices == 15) {
                for (int e = 0; e < 4; e++) {
                    if ((v >> e) & 1) {
                        const uint64_t *src = &basis_effect[(first_basis[s] + e) * st];
                        for (size_t k = 0; k < st; k++) row[k] ^= src[k];
                    }
                }
            } else if (sites_[s].choices == 3) {
                for (int e = 0; e < 2; e++) {
                    if ((v >> e) & 1) {
                        const uint64_t *src = &basis_effect[(first_basis[s] + e) * st];
                        for (size_t k = 0; k < st; k++) row[k] ^= src[k];
                    }
                }
            } else {
                std::copy_n(&basis_effect[first_basis[s] * st], st, row);
            }
        }
    }
}

SparseSampler::SparseSampler(const CompiledCircuit &compiled, double p) : compiled_(&compiled), skipper_(p) {}

Attempt SparseSampler::attempt(std::mt19937_64 &rng, FaultRecord *record) const {
    const auto &sites = compiled_->sites();
    size_t dw = compiled_->detector_words();
    uint64_t det[16] = {};
    uint64_t *dacc = dw <= 16 ? det : nullptr;
    std::vector<uint64_t> big;
    if (!dacc) {
        big.assign(dw, 0);
        dacc = big.data();
    }
    Attempt a;
    for (uint64_t s = skipper_.skip(rng); s < sites.size(); s += 1 + skipper_.skip(rng)) {
        uint8_t c = uniform_choice(rng, sites[s].choices);
        const uint64_t *e = compiled_->effect(static_cast<uint32_t>(s), c);
        for (size_t k = 0; k < dw; k++) {
            dacc[k] ^= e[k];
        }
        a.x ^= e[dw];
        a.z ^= e[dw + 1];
        if (record) {
            record->push_back({static_cast<uint32_t>(s), c});
        }
    }
    for (size_t k = 0; k < dw; k++) {
        if (dacc[k]) {
            a.accepted = false;
        }
    }
    return a;
}

Attempt SparseSampler::until_accepted(std::mt19937_64 &rng, uint64_t &attempts, FaultRecord *record) const {
    for (;;) {
        attempts++;
        size_t mark = record ? record->size() : 0;
        Attempt a = attempt(rng, record);
        if (a.accepted) {
            return a;
        }
        if (record) {
            record->resize(mark);
        }
    }
}

Attempt SparseSampler::evaluate(const FaultRecord &faults) const {
    size_t dw = compiled_->detector_words();
    std::vector<uint64_t> det(dw, 0);
    Attempt a;
    for (const Fault &f : faults) {
        const uint64_t *e = compiled_->effect(f.site, f.choice);
        for (size_t k = 0; k < dw; k++) {
            det[k] ^= e[k];
        }
        a.x ^= e[dw];
        a.z ^= e[dw + 1];
    }
    a.accepted = std::all_of(det.begin(), det.end(), [](uint64_t w) { return w == 0; });
    return a;
}

}  // namespace iceberg
