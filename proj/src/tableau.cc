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

#include "iceberg/tableau.h"

#include <bit>
#include <stdexcept>

namespace iceberg {

Tableau::Tableau(size_t n) : n_(n), w_((n + 63) / 64), x_((2 * n + 1) * w_, 0), z_((2 * n + 1) * w_, 0), sign_(2 * n + 1, 0) {
    for (size_t q = 0; q < n; q++) {
        x_[q * w_ + q / 64] |= uint64_t{1} << (q % 64);
        z_[(n + q) * w_ + q / 64] |= uint64_t{1} << (q % 64);
    }
}

void Tableau::rowmul(size_t h, size_t i) {
    // Phase bookkeeping: count +i and -i contributions per word.
    int e = 2 * sign_[h] + 2 * sign_[i];
    const uint64_t *xi = xrow(i);
    const uint64_t *zi = zrow(i);
    uint64_t *xh = xrow(h);
    uint64_t *zh = zrow(h);
    for (size_t k = 0; k < w_; k++) {
        uint64_t x1 = xi[k], z1 = zi[k], x2 = xh[k], z2 = zh[k];
        uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2);
        uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
        e += std::popcount(plus) - std::popcount(minus);
        xh[k] = x1 ^ x2;
        zh[k] = z1 ^ z2;
    }
    e = ((e % 4) + 4) % 4;
    sign_[h] = (e & 2) != 0;
}

void Tableau::h(size_t q) {
    size_t wd = q / 64;
    uint64_t bit = uint64_t{1} << (q % 64);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t &xw = x_[r * w_ + wd];
        uint64_t &zw = z_[r * w_ + wd];
        bool xb = xw & bit;
        bool zb = zw & bit;
        sign_[r] ^= xb && zb;
        xw = (xw & ~bit) | (zb ? bit : 0);
        zw = (zw & ~bit) | (xb ? bit : 0);
    }
}

void Tableau::cnot(size_t c, size_t t) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xc = getx(r, c), zc = getz(r, c), xt = getx(r, t), zt = getz(r, t);
        sign_[r] ^= xc && zt && !(xt ^ zc);
        if (xc) {
            x_[r * w_ + t / 64] ^= uint64_t{1} << (t % 64);
        }
        if (zt) {
            z_[r * w_ + c / 64] ^= uint64_t{1} << (c % 64);
        }
    }
}

void Tableau::x(size_t q) {
    for (size_t r = 0; r < 2 * n_; r++) {
        sign_[r] ^= getz(r, q);
    }
}

void Tableau::z(size_t q) {
    for (size_t r = 0; r < 2 * n_; r++) {
        sign_[r] ^= getx(r, q);
    }
}

void Tableau::apply_pauli(const PauliString &p) {
    for (size_t r = 0; r < 2 * n_; r++) {
        sign_[r] ^= anticommutes_row(r, p);
    }
}

void Tableau::permute(const std::vector<size_t> &qubits, const std::vector<uint32_t> &perm) {
    for (size_t r = 0; r < 2 * n_; r++) {
        std::vector<bool> xs(qubits.size()), zs(qubits.size());
        for (size_t i = 0; i < qubits.size(); i++) {
            xs[i] = getx(r, qubits[i]);
            zs[i] = getz(r, qubits[i]);
        }
        for (size_t i = 0; i < qubits.size(); i++) {
            size_t q = qubits[perm[i]];
            uint64_t bit = uint64_t{1} << (q % 64);
            uint64_t &xw = x_[r * w_ + q / 64];
            uint64_t &zw = z_[r * w_ + q / 64];
            xw = xs[i] ? (xw | bit) : (xw & ~bit);
            zw = zs[i] ? (zw | bit) : (zw & ~bit);
        }
    }
}

bool Tableau::anticommutes_row(size_t r, const PauliString &p) const {
    if (p.size() != n_) {
        throw std::invalid_argument("Tableau: Pauli length mismatch");
    }
    const uint64_t *px = p.xs.data();
    const uint64_t *pz = p.zs.data();
    uint64_t acc = 0;
    for (size_t k = 0; k < w_; k++) {
        acc ^= (xrow(r)[k] & pz[k]) ^ (zrow(r)[k] & px[k]);
    }
    return std::popcount(acc) & 1;
}

void Tableau::set_row(size_t r, const PauliString &p) {
    for (size_t k = 0; k < w_; k++) {
        xrow(r)[k] = p.xs.data()[k];
        zrow(r)[k] = p.zs.data()[k];
    }
    sign_[r] = p.negative;
}

bool Tableau::measure_pauli(const PauliString &p, std::mt19937_64 &rng, std::optional<bool> forced) {
    size_t pivot = 2 * n_;
    for (size_t r = n_; r < 2 * n_; r++) {
        if (anticommutes_row(r, p)) {
            pivot = r;
            break;
        }
    }
    if (pivot == 2 * n_) {
        return *expectation(p);
    }
    for (size_t r = 0; r < 2 * n_; r++) {
        if (r != pivot && anticommutes_row(r, p)) {
            rowmul(r, pivot);
        }
    }
    bool outcome = forced ? *forced : (rng() & 1);
    std::copy_n(xrow(pivot), w_, xrow(pivot - n_));
    std::copy_n(zrow(pivot), w_, zrow(pivot - n_));
    sign_[pivot - n_] = sign_[pivot];
    PauliString row = p;
    row.negative = outcome != p.negative;
    set_row(pivot, row);
    return outcome;
}

std::optional<bool> Tableau::expectation(const PauliString &p) const {
    for (size_t r = n_; r < 2 * n_; r++) {
        if (anticommutes_row(r, p)) {
            return std::nullopt;
        }
    }
    auto *self = const_cast<Tableau *>(this);
    size_t s = 2 * n_;
    std::fill_n(self->xrow(s), w_, 0);
    std::fill_n(self->zrow(s), w_, 0);
    self->sign_[s] = 0;
    for (size_t i = 0; i < n_; i++) {
        if (anticommutes_row(i, p)) {
            self->rowmul(s, i + n_);
        }
    }
    return sign_[s] != p.negative;
}

bool Tableau::measure_z(size_t q, std::mt19937_64 &rng, std::optional<bool> forced) {
    PauliString p(n_);
    p.zs.set(q, true);
    return measure_pauli(p, rng, forced);
}

bool Tableau::measure_x(size_t q, std::mt19937_64 &rng, std::optional<bool> forced) {
    PauliString p(n_);
    p.xs.set(q, true);
    return measure_pauli(p, rng, forced);
}

void Tableau::reset_z(size_t q, std::mt19937_64 &rng) {
    if (measure_z(q, rng)) {
        x(q);
    }
}

void Tableau::reset_x(size_t q, std::mt19937_64 &rng) {
    if (measure_x(q, rng)) {
        z(q);
    }
}

std::vector<PauliString> Tableau::stabilizers() const {
    std::vector<PauliString> out;
    for (size_t r = n_; r < 2 * n_; r++) {
        PauliString p(n_);
        for (size_t k = 0; k < w_; k++) {
            p.xs.data()[k] = xrow(r)[k];
            p.zs.data()[k] = zrow(r)[k];
        }
        p.negative = sign_[r];
        out.push_back(std::move(p));
    }
    return out;
}

StabilizerRun simulate_stabilizer(const Circuit &circuit, uint64_t seed, const Tableau *initial) {
    if (initial && initial->num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("simulate_stabilizer: initial state size mismatch");
    }
    StabilizerRun run{std::vector<bool>(circuit.num_measurements(), false), false,
                      initial ? *initial : Tableau(circuit.num_qubits())};
    std::mt19937_64 rng(seed);
    Tableau &t = run.state;
    for (const auto &ts : circuit.timesteps()) {
        for (const Gate &g : ts) {
            switch (g.type) {
                case GateType::PZ:
                    t.reset_z(g.targets[0], rng);
                    break;
                case GateType::PX:
                    t.reset_x(g.targets[0], rng);
                    break;
                case GateType::H:
                    t.h(g.targets[0]);
                    break;
                case GateType::CNOT:
                    t.cnot(g.targets[0], g.targets[1]);
                    break;
                case GateType::MZ:
                    run.measurements[g.measurement] = t.measure_z(g.targets[0], rng);
                    break;
                case GateType::MX:
                    run.measurements[g.measurement] = t.measure_x(g.targets[0], rng);
                    break;
                case GateType::PERM: {
                    const Register &r = circuit.registers()[g.reg];
                    std::vector<size_t> qs;
                    for (uint32_t i = 0; i < r.size; i++) {
                        qs.push_back(r.offset + i);
                    }
                    t.permute(qs, g.targets);
                    break;
                }
                case GateType::ABORTIF: {
                    bool parity = false;
                    for (uint32_t m : g.targets) {
                        parity ^= run.measurements[m];
                    }
                    run.aborted |= parity;
                    break;
                }
            }
        }
    }
    return run;
}

}  // namespace iceberg
