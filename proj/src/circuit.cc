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

#include "iceberg/circuit.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace iceberg {

const char *gate_name(GateType t) {
    switch (t) {
        case GateType::PZ:
            return "PZ";
        case GateType::PX:
            return "PX";
        case GateType::H:
            return "H";
        case GateType::CNOT:
            return "CNOT";
        case GateType::MZ:
            return "MZ";
        case GateType::MX:
            return "MX";
        case GateType::PERM:
            return "PERM";
        case GateType::ABORTIF:
            return "ABORTIF";
    }
    return "?";
}

uint32_t Circuit::add_register(const std::string &name, uint32_t size) {
    for (const auto &r : registers_) {
        if (r.name == name) {
            throw CircuitError("duplicate register " + name);
        }
    }
    uint32_t off = num_qubits_;
    registers_.push_back({name, off, size});
    num_qubits_ += size;
    qubit_free_at_.resize(num_qubits_, 0);
    return off;
}

const Register &Circuit::reg(const std::string &name) const {
    for (const auto &r : registers_) {
        if (r.name == name) {
            return r;
        }
    }
    throw CircuitError("unknown register " + name);
}

uint32_t Circuit::measurement_index(const std::string &key) const {
    auto it = std::find(measurement_keys_.begin(), measurement_keys_.end(), key);
    if (it == measurement_keys_.end()) {
        throw CircuitError("unknown measurement key " + key);
    }
    return static_cast<uint32_t>(it - measurement_keys_.begin());
}

size_t Circuit::num_gates(GateType t) const {
    size_t c = 0;
    for (const auto &ts : timesteps_) {
        for (const auto &g : ts) {
            c += g.type == t;
        }
    }
    return c;
}

void Circuit::place(Gate g, const std::vector<uint32_t> &touched) {
    uint32_t t = 0;
    for (uint32_t q : touched) {
        if (q >= num_qubits_) {
            throw CircuitError(std::string(gate_name(g.type)) + ": qubit out of range");
        }
        t = std::max(t, qubit_free_at_[q]);
    }
    if (g.type == GateType::ABORTIF) {
        for (uint32_t m : g.targets) {
            if (m >= measurement_time_.size()) {
                throw CircuitError("ABORTIF: measurement index out of range");
            }
            t = std::max(t, measurement_time_[m] + 1);
        }
    }
    if (timesteps_.size() <= t) {
        timesteps_.resize(t + 1);
    }
    if (g.type == GateType::MZ || g.type == GateType::MX) {
        measurement_time_[g.measurement] = t;
    }
    timesteps_[t].push_back(std::move(g));
    for (uint32_t q : touched) {
        qubit_free_at_[q] = t + 1;
    }
}

uint32_t Circuit::new_measurement(const std::string &key) {
    uint32_t idx = num_measurements();
    std::string k = key.empty() ? "m" + std::to_string(idx) : key;
    if (std::find(measurement_keys_.begin(), measurement_keys_.end(), k) != measurement_keys_.end()) {
        throw CircuitError("duplicate measurement key " + k);
    }
    measurement_keys_.push_back(std::move(k));
    measurement_time_.push_back(0);
    return idx;
}

void Circuit::prep_z(uint32_t q) { place({GateType::PZ, {q}}, {q}); }
void Circuit::prep_x(uint32_t q) { place({GateType::PX, {q}}, {q}); }
void Circuit::h(uint32_t q) { place({GateType::H, {q}}, {q}); }

void Circuit::cnot(uint32_t control, uint32_t target) {
    if (control == target) {
        throw CircuitError("CNOT: control equals target");
    }
    place({GateType::CNOT, {control, target}}, {control, target});
}

uint32_t Circuit::measure_z(uint32_t q, const std::string &key) {
    uint32_t m = new_measurement(key);
    place({GateType::MZ, {q}, 0, m}, {q});
    return m;
}

uint32_t Circuit::measure_x(uint32_t q, const std::string &key) {
    uint32_t m = new_measurement(key);
    place({GateType::MX, {q}, 0, m}, {q});
    return m;
}

void Circuit::permute(const std::string &name, const std::vector<uint32_t> &perm) {
    const Register &r = reg(name);
    if (perm.size() != r.size) {
        throw CircuitError("PERM: permutation size mismatch");
    }
    std::vector<bool> seen(r.size, false);
    for (uint32_t v : perm) {
        if (v >= r.size || seen[v]) {
            throw CircuitError("PERM: not a bijection");
        }
        seen[v] = true;
    }
    std::vector<uint32_t> touched;
    for (uint32_t i = 0; i < r.size; i++) {
        touched.push_back(r.offset + i);
    }
    uint32_t idx = static_cast<uint32_t>(&r - registers_.data());
    place({GateType::PERM, perm, idx}, touched);
}

void Circuit::abort_if(std::vector<uint32_t> measurements) {
    std::sort(measurements.begin(), measurements.end());
    place({GateType::ABORTIF, std::move(measurements)}, {});
}

uint32_t Circuit::append(const Circuit &other, const std::vector<uint32_t> &qubit_map, const std::string &key_prefix) {
    if (qubit_map.size() != other.num_qubits()) {
        throw CircuitError("append: qubit map size mismatch");
    }
    uint32_t moff = num_measurements();
    // Timestep order may differ from the other record's order.
    std::vector<uint32_t> mmap(other.num_measurements());
    for (const auto &ts : other.timesteps()) {
        for (const auto &g : ts) {
            switch (g.type) {
                case GateType::PZ:
                    prep_z(qubit_map[g.targets[0]]);
                    break;
                case GateType::PX:
                    prep_x(qubit_map[g.targets[0]]);
                    break;
                case GateType::H:
                    h(qubit_map[g.targets[0]]);
                    break;
                case GateType::CNOT:
                    cnot(qubit_map[g.targets[0]], qubit_map[g.targets[1]]);
                    break;
                case GateType::MZ:
                    mmap[g.measurement] =
                        measure_z(qubit_map[g.targets[0]], key_prefix + other.measurement_keys()[g.measurement]);
                    break;
                case GateType::MX:
                    mmap[g.measurement] =
                        measure_x(qubit_map[g.targets[0]], key_prefix + other.measurement_keys()[g.measurement]);
                    break;
                case GateType::PERM:
                    throw CircuitError("append: PERM cannot be remapped");
                case GateType::ABORTIF: {
                    std::vector<uint32_t> ms;
                    for (uint32_t m : g.targets) {
                        ms.push_back(mmap[m]);
                    }
                    abort_if(std::move(ms));
                    break;
                }
            }
        }
    }
    return moff;
}

std::string Circuit::to_text() const {
    std::ostringstream out;
    for (const auto &r : registers_) {
        out << "REG " << r.name << ' ' << r.offset << ' ' << r.size << '\n';
    }
    for (const auto &ts : timesteps_) {
        bool first = true;
        for (const auto &g : ts) {
            if (!first) {
                out << "; ";
            }
            first = false;
            out << gate_name(g.type);
            switch (g.type) {
                case GateType::PZ:
                case GateType::PX:
                case GateType::H:
                    out << ' ' << g.targets[0];
                    break;
                case GateType::CNOT:
                    out << ' ' << g.targets[0] << ' ' << g.targets[1];
                    break;
                case GateType::MZ:
                case GateType::MX:
                    out << ' ' << g.targets[0] << ' ' << measurement_keys_[g.measurement];
                    break;
                case GateType::PERM:
                    out << ' ' << registers_[g.reg].name;
                    for (uint32_t v : g.targets) {
                        out << ' ' << v;
                    }
                    break;
                case GateType::ABORTIF:
                    out << ' ';
                    for (size_t i = 0; i < g.targets.size(); i++) {
                        out << (i ? "^" : "") << measurement_keys_[g.targets[i]];
                    }
                    break;
            }
        }
        out << '\n';
    }
    return out.str();
}

namespace {

uint32_t parse_uint(const std::string &s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw CircuitError("expected an unsigned integer, got '" + s + "'");
    }
    return static_cast<uint32_t>(std::stoul(s));
}

}  // namespace

Circuit Circuit::from_text(const std::string &text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    std::unordered_map<std::string, uint32_t> keys;
    bool in_body = false;
    while (std::getline(in, line)) {
        if (line.rfind("REG ", 0) == 0) {
            if (in_body) {
                throw CircuitError("REG after the first timestep");
            }
            std::istringstream ls(line.substr(4));
            std::string name, off, size;
            ls >> name >> off >> size;
            if (parse_uint(off) != c.num_qubits_) {
                throw CircuitError("REG offsets must be contiguous");
            }
            c.add_register(name, parse_uint(size));
            continue;
        }
        in_body = true;
        std::vector<Gate> step;
        std::vector<bool> used(c.num_qubits_, false);
        auto claim = [&](uint32_t q) {
            if (q >= c.num_qubits_) {
                throw CircuitError("qubit out of range in: " + line);
            }
            if (used[q]) {
                throw CircuitError("gates in a timestep overlap in: " + line);
            }
            used[q] = true;
        };
        size_t start = 0;
        while (start < line.size()) {
            size_t end = line.find(';', start);
            if (end == std::string::npos) {
                end = line.size();
            }
            std::istringstream gs(line.substr(start, end - start));
            start = end + 1;
            std::vector<std::string> tok;
            for (std::string t; gs >> t;) {
                tok.push_back(t);
            }
            if (tok.empty()) {
                continue;
            }
            const std::string &op = tok[0];
            Gate g{};
            auto need = [&](size_t n) {
                if (tok.size() != n) {
                    throw CircuitError("wrong operand count for " + op);
                }
            };
            if (op == "PZ" || op == "PX" || op == "H") {
                need(2);
                g.type = op == "PZ" ? GateType::PZ : op == "PX" ? GateType::PX : GateType::H;
                g.targets = {parse_uint(tok[1])};
                claim(g.targets[0]);
            } else if (op == "CNOT") {
                need(3);
                g.type = GateType::CNOT;
                g.targets = {parse_uint(tok[1]), parse_uint(tok[2])};
                if (g.targets[0] == g.targets[1]) {
                    throw CircuitError("CNOT: control equals target");
                }
                claim(g.targets[0]);
                claim(g.targets[1]);
            } else if (op == "MZ" || op == "MX") {
                need(3);
                g.type = op == "MZ" ? GateType::MZ : GateType::MX;
                g.targets = {parse_uint(tok[1])};
                claim(g.targets[0]);
                if (keys.count(tok[2])) {
                    throw CircuitError("duplicate measurement key " + tok[2]);
                }
                g.measurement = static_cast<uint32_t>(c.measurement_keys_.size());
                keys[tok[2]] = g.measurement;
                c.measurement_keys_.push_back(tok[2]);
                c.measurement_time_.push_back(static_cast<uint32_t>(c.timesteps_.size()));
            } else if (op == "PERM") {
                if (tok.size() < 2) {
                    throw CircuitError("PERM needs a register");
                }
                g.type = GateType::PERM;
                const Register &r = c.reg(tok[1]);
                g.reg = static_cast<uint32_t>(&r - c.registers_.data());
                need(2 + r.size);
                std::vector<bool> seen(r.size, false);
                for (size_t i = 2; i < tok.size(); i++) {
                    uint32_t v = parse_uint(tok[i]);
                    if (v >= r.size || seen[v]) {
                        throw CircuitError("PERM: not a bijection");
                    }
                    seen[v] = true;
                    g.targets.push_back(v);
                }
                for (uint32_t i = 0; i < r.size; i++) {
                    claim(r.offset + i);
                }
            } else if (op == "ABORTIF") {
                need(2);
                g.type = GateType::ABORTIF;
                size_t s = 0;
                const std::string &expr = tok[1];
                while (s <= expr.size()) {
                    size_t e = expr.find('^', s);
                    if (e == std::string::npos) {
                        e = expr.size();
                    }
                    auto it = keys.find(expr.substr(s, e - s));
                    if (it == keys.end()) {
                        throw CircuitError("ABORTIF: unknown key in " + expr);
                    }
                    if (c.measurement_time_[it->second] >= c.timesteps_.size()) {
                        throw CircuitError("ABORTIF reads a measurement from the same timestep");
                    }
                    g.targets.push_back(it->second);
                    s = e + 1;
                }
            } else {
                throw CircuitError("unknown gate " + op);
            }
            step.push_back(std::move(g));
        }
        c.timesteps_.push_back(std::move(step));
    }
    // Builder appends after a parsed circuit go after its last timestep.
    std::fill(c.qubit_free_at_.begin(), c.qubit_free_at_.end(), static_cast<uint32_t>(c.timesteps_.size()));
    return c;
}

std::vector<FaultSite> fault_sites(const Circuit &c, const NoiseModel &noise) {
    std::vector<FaultSite> sites;
    for (uint32_t t = 0; t < c.timesteps().size(); t++) {
        const auto &ts = c.timesteps()[t];
        std::vector<bool> busy(noise.idle ? c.num_qubits() : 0, false);
        for (uint32_t i = 0; i < ts.size(); i++) {
            const Gate &g = ts[i];
            if (noise.idle) {
                if (g.type == GateType::PERM) {
                    const Register &r = c.registers()[g.reg];
                    for (uint32_t q = 0; q < r.size; q++) {
                        busy[r.offset + q] = true;
                    }
                } else if (g.type != GateType::ABORTIF) {
                    for (uint32_t q : g.targets) {
                        busy[q] = true;
                    }
                }
            }
            switch (g.type) {
                case GateType::CNOT:
                    if (noise.two_qubit_depolarizing) {
                        sites.push_back({SiteKind::CNOT, t, i, g.targets[0], g.targets[1], 15});
                    }
                    break;
                case GateType::MZ:
                case GateType::MX:
                    if (noise.measurement_flip) {
                        sites.push_back({SiteKind::MEASURE, t, i, g.targets[0], 0, 1});
                    }
                    break;
                case GateType::PZ:
                case GateType::PX:
                    if (noise.prep) {
                        sites.push_back({SiteKind::PREP, t, i, g.targets[0], 0, 1});
                    }
                    break;
                case GateType::H:
                    if (noise.one_qubit_gate) {
                        sites.push_back({SiteKind::ONE_QUBIT, t, i, g.targets[0], 0, 3});
                    }
                    break;
                default:
                    break;
            }
        }
        if (noise.idle) {
            for (uint32_t q = 0; q < c.num_qubits(); q++) {
                if (!busy[q]) {
                    sites.push_back({SiteKind::IDLE, t, 0, q, 0, 3});
                }
            }
        }
    }
    return sites;
}

}  // namespace iceberg
