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

#ifndef ICEBERG_GF2_H
#define ICEBERG_GF2_H

#include <optional>
#include <string>
#include <vector>

#include "iceberg/bitvec.h"

namespace iceberg {

/// Dense matrix over GF(2) stored as a list of bit-packed rows.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t num_rows, size_t num_cols);
    static BitMatrix from_rows(std::vector<BitVec> rows, size_t num_cols);
    /// Each string is a row of '0'/'1' characters.
    static BitMatrix from_strings(const std::vector<std::string> &rows);
    static BitMatrix identity(size_t n);

    size_t num_rows() const { return rows_.size(); }
    size_t num_cols() const { return num_cols_; }
    const BitVec &row(size_t r) const { return rows_[r]; }
    BitVec &row(size_t r) { return rows_[r]; }
    const std::vector<BitVec> &rows() const { return rows_; }
    bool get(size_t r, size_t c) const { return rows_[r].get(c); }
    void set(size_t r, size_t c, bool v) { rows_[r].set(c, v); }
    void push_row(BitVec row);

    BitMatrix transposed() const;
    /// M * v, one output bit per row.
    BitVec multiply(const BitVec &v) const;
    /// This * other.
    BitMatrix multiply(const BitMatrix &other) const;
    /// Rows of this stacked above rows of other.
    BitMatrix stacked(const BitMatrix &other) const;

    std::string str() const;
    bool operator==(const BitMatrix &other) const = default;

   private:
    size_t num_cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Reduced row-echelon form plus the pivot column of each nonzero row.
struct RowReduction {
    BitMatrix reduced;
    std::vector<size_t> pivot_columns;
    size_t rank() const { return pivot_columns.size(); }
};

/// Gauss-Jordan elimination. Zero rows are dropped from `reduced`.
RowReduction row_reduce(const BitMatrix &m);
size_t rank(const BitMatrix &m);
/// Basis of { v : m v = 0 }.
BitMatrix nullspace(const BitMatrix &m);
bool same_rowspace(const BitMatrix &a, const BitMatrix &b);
/// Coefficients c with sum_i c_i row_i == target, if any.
std::optional<BitVec> solve_row_combination(const BitMatrix &m, const BitVec &target);

/// Incremental row-space membership oracle.
class RowSpace {
   public:
    explicit RowSpace(size_t num_cols) : num_cols_(num_cols) {}
    explicit RowSpace(const BitMatrix &m);

    /// Adds v; returns false if v was already in the span.
    bool add(BitVec v);
    /// Residue of v after elimination against the stored basis.
    BitVec reduce(BitVec v) const;
    bool contains(const BitVec &v) const { return reduce(v).none(); }
    size_t dimension() const { return basis_.size(); }
    const std::vector<BitVec> &basis() const { return basis_; }

   private:
    size_t num_cols_;
    std::vector<BitVec> basis_;
    std::vector<size_t> pivots_;
};

/// Rows are 2n-bit symplectic vectors (x part || z part).
struct SymplecticMatrix {
    size_t num_qubits = 0;
    BitMatrix rows;
    std::vector<size_t> pivot_columns;
};

SymplecticMatrix row_reduce(const SymplecticMatrix &m);

}  // namespace iceberg

#endif
