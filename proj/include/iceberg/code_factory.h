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

#ifndef ICEBERG_CODE_FACTORY_H
#define ICEBERG_CODE_FACTORY_H

#include <optional>
#include <string>
#include <vector>

#include "iceberg/stabilizer_code.h"

namespace iceberg {

/// Maps an [[n,k,d]] stabilizer code to a CSS code on 2n qubits grouped in
/// pairs (2i, 2i+1). Each generator P yields D_X(P) and D_Z(P); logical pair
/// j of the source yields ququad logicals 2j and 2j+1:
///   X_{2j} = D_X(X_j), Z_{2j} = D_Z(Z_j), X_{2j+1} = D_X(Z_j), Z_{2j+1} = D_Z(X_j).
StabilizerCode map_to_ququad(const StabilizerCode &code);

/// Substitutes outer qubit q by logical qubit q % inner.k of inner block
/// q / inner.k. Generators are the inner stabilizers of each block (block
/// major) followed by the images of the outer generators. Requires
/// outer.n % inner.k == 0.
StabilizerCode concatenate(const StabilizerCode &outer, const StabilizerCode &inner, const std::string &name = "");

/// Two interleaved copies of a CSS code: copy c occupies qubits 2i + c.
StabilizerCode interleave_copies(const StabilizerCode &code);

/// map_to_ququad followed by concatenation onto [[4,2,2]].
StabilizerCode concat_iceberg_m1(const StabilizerCode &code, const std::string &name = "");
/// The outer CSS code imposed separately on the first and the second logical
/// qubits of n [[4,2,2]] blocks.
StabilizerCode concat_iceberg_m2(const StabilizerCode &outer, const std::string &name = "");

/// Generator pairs (indices into `rows`) with support(P) = support(Q) = support(PQ).
struct PairedSupportPartition {
    std::vector<PauliString> rows;
    std::vector<std::pair<size_t, size_t>> pairs;
    std::vector<size_t> singletons;
};

bool has_paired_support(const PauliString &p, const PauliString &q);

/// Tries the displayed generator rows first, then products of at most two
/// generators. Returns nullopt if no full pairing is found.
std::optional<PairedSupportPartition> paired_support_partition(const StabilizerCode &code);

struct CatalogEntry {
    std::string name;
    size_t n;
    size_t k;
    size_t d;
    std::string recipe;
};

const std::vector<CatalogEntry> &catalog_entries();
/// Built, validated catalog code. Throws std::out_of_range for unknown names.
/// Results are cached; safe to call concurrently.
const StabilizerCode &catalog(const std::string &name);

/// [[7,1,3]] Steane code; not part of the catalog.
StabilizerCode steane_code();

}  // namespace iceberg

#endif
