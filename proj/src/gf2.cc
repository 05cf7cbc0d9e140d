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

#include "iceberg/gf2.h"

#include <stdexcept>

namespace iceberg {

BitMatrix::BitMatrix(size_t num_rows, size_t num_cols) : num_cols_(num_cols), rows_(num_rows, BitVec(num_cols)) {}

BitMatrix BitMatrix::from_rows(std::vector<BitVec> rows, size_t num_cols) {
    BitMatrix m(0, num_cols);
    for (auto &r : rows) {
        m.push_row(std::move(r));
    }
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string> &rows) {
    if (rows.empty()) {
        return BitMatrix();
    }
    BitMatrix m(0, rows[0].size());
    for (const auto &r : rows) {
        m.push_row(BitVec::from_string(r));
    }
    return m;
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.set(i, i, true);
    }
    return m;
}

void BitMatrix::push_row(BitVec row) {
    if (row.size() != num_cols_) {
        throw std::invalid_argument("BitMatrix::push_row: width mismatch");
    }
    rows_.push_back(std::move(row));
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(num_cols_, rows_.size());
    for (size_t r = 0; r < rows_.size(); r++) {
        for (size_t c : rows_[r].set_bits()) {
            t.set(c, r, true);
        }
    }
    return t;
}

BitVec BitMatrix::multiply(const BitVec &v) const {
    BitVec out(rows_.size());
    for (size_t r = 0; r < rows_.size(); r++) {
        if (rows_[r].dot(v)) {
            out.set(r, true);
        }
    }
    return out;
}

BitMatrix BitMatrix::multiply(const BitMatrix &other) const {
    if (num_cols_ != other.num_rows()) {
        throw std::invalid_argument("BitMatrix::multiply: shape mismatch");
    }
    BitMatrix out(rows_.size(), other.num_cols());
    for (size_t r = 0; r < rows_.size(); r++) {
        for (size_t k : rows_[r].set_bits()) {
            out.row(r) ^= other.row(k);
        }
    }
    return out;
}

BitMatrix BitMatrix::stacked(const BitMatrix &other) const {
    if (rows_.empty()) {
        return other;
    }
    if (other.num_rows() == 0) {
        return *this;
    }
    BitMatrix out = *this;
    for (const auto &r : other.rows()) {
        out.push_row(r);
    }
    return out;
}

std::string BitMatrix::str() const {
    std::string s;
    for (const auto &r : rows_) {
        s += r.str();
        s += '\n';
    }
    return s;
}

RowReduction row_reduce(const BitMatrix &m) {
    std::vector<BitVec> rows = m.rows();
    std::vector<size_t> pivots;
    size_t next = 0;
    for (size_t c = 0; c < m.num_cols() && next < rows.size(); c++) {
        size_t found = rows.size();
        for (size_t r = next; r < rows.size(); r++) {
            if (rows[r].get(c)) {
                found = r;
                break;
            }
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[next], rows[found]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != next && rows[r].get(c)) {
                rows[r] ^= rows[next];
            }
        }
        pivots.push_back(c);
        next++;
    }
    rows.resize(next);
    return RowReduction{BitMatrix::from_rows(std::move(rows), m.num_cols()), std::move(pivots)};
}

size_t rank(const BitMatrix &m) { return RowSpace(m).dimension(); }

BitMatrix nullspace(const BitMatrix &m) {
    RowReduction rr = row_reduce(m);
    size_t n = m.num_cols();
    std::vector<bool> is_pivot(n, false);
    for (size_t c : rr.pivot_columns) {
        is_pivot[c] = true;
    }
    BitMatrix out(0, n);
    for (size_t f = 0; f < n; f++) {
        if (is_pivot[f]) {
            continue;
        }
        BitVec v(n);
        v.set(f, true);
        for (size_t r = 0; r < rr.rank(); r++) {
            if (rr.reduced.get(r, f)) {
                v.set(rr.pivot_columns[r], true);
            }
        }
        out.push_row(std::move(v));
    }
    return out;
}

bool same_rowspace(const BitMatrix &a, const BitMatrix &b) {
    if (a.num_cols() != b.num_cols()) {
        return false;
    }
    RowSpace sa(a);
    RowSpace sb(b);
    if (sa.dimension() != sb.dimension()) {
        return false;
    }
    for (const auto &r : b.rows()) {
        if (!sa.contains(r)) {
            return false;
        }
    }
    return true;
}

std::optional<BitVec> solve_row_combination(const BitMatrix &m, const BitVec &target) {
    // Augment each row with an identity tag recording which inputs were combined.
    size_t r = m.num_rows();
    size_t n = m.num_cols();
    std::vector<BitVec> work;
    std::vector<BitVec> tags;
    for (size_t i = 0; i < r; i++) {
        work.push_back(m.row(i));
        BitVec t(r);
        t.set(i, true);
        tags.push_back(std::move(t));
    }
    BitVec residue = target;
    BitVec coeffs(r);
    std::vector<bool> used(r, false);
    for (size_t c = 0; c < n; c++) {
        size_t found = r;
        for (size_t i = 0; i < r; i++) {
            if (!used[i] && work[i].get(c)) {
                found = i;
                break;
            }
        }
        if (found == r) {
            continue;
        }
        used[found] = true;
        for (size_t i = 0; i < r; i++) {
            if (i != found && work[i].get(c)) {
                work[i] ^= work[found];
                tags[i] ^= tags[found];
            }
        }
        if (residue.get(c)) {
            residue ^= work[found];
            coeffs ^= tags[found];
        }
    }
    if (residue.any()) {
        return std::nullopt;
    }
    return coeffs;
}

RowSpace::RowSpace(const BitMatrix &m) : num_cols_(m.num_cols()) {
    for (const auto &r : m.rows()) {
        add(r);
    }
}

BitVec RowSpace::reduce(BitVec v) const {
    for (size_t i = 0; i < basis_.size(); i++) {
        if (v.get(pivots_[i])) {
            v ^= basis_[i];
        }
    }
    return v;
}

bool RowSpace::add(BitVec v) {
    if (v.size() != num_cols_) {
        throw std::invalid_argument("RowSpace::add: width mismatch");
    }
    v = reduce(std::move(v));
    if (v.none()) {
        return false;
    }
    size_t p = v.first_set();
    // Keep the basis fully reduced so reduce() is a single pass.
    for (auto &b : basis_) {
        if (b.get(p)) {
            b ^= v;
        }
    }
    basis_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

SymplecticMatrix row_reduce(const SymplecticMatrix &m) {
    RowReduction rr = row_reduce(m.rows);
    return SymplecticMatrix{m.num_qubits, std::move(rr.reduced), std::move(rr.pivot_columns)};
}

}  // namespace iceberg
