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

#ifndef ICEBERG_STABILIZER_CODE_H
#define ICEBERG_STABILIZER_CODE_H

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iceberg/gf2.h"
#include "iceberg/pauli.h"

namespace iceberg {

struct NotCssError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotAnAutomorphism : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentCode : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An [[n,k,d]] stabilizer code.
///
/// `generators` keeps the display order used by the text format. For CSS
/// codes `hx` and `hz` hold the X-type and Z-type rows in that same order;
/// for non-CSS codes they are empty.
struct StabilizerCode {
    std::string name;
    size_t n = 0;
    size_t k = 0;
    std::vector<PauliString> generators;
    BitMatrix hx;
    BitMatrix hz;
    std::vector<PauliString> logical_x;
    std::vector<PauliString> logical_z;
    std::optional<size_t> d_known;
    std::vector<std::pair<size_t, size_t>> ququad_grouping;

    /// Builds a code from generator rows. k is n - rank; if logicals are
    /// omitted they are derived.
    static StabilizerCode from_generators(std::string name, std::vector<PauliString> generators,
                                          std::vector<PauliString> logical_x = {},
                                          std::vector<PauliString> logical_z = {},
                                          std::optional<size_t> d = std::nullopt);
    static StabilizerCode from_css(std::string name, const BitMatrix &hx, const BitMatrix &hz,
                                   std::vector<PauliString> logical_x = {}, std::vector<PauliString> logical_z = {},
                                   std::optional<size_t> d = std::nullopt);

    bool is_css() const { return css_; }
    /// Throws NotCssError if not CSS.
    void require_css(const char *what) const;
    /// X and Z checks have equal row spaces.
    bool is_self_dual() const;
    /// Symplectic 2n-bit rows of all generators.
    BitMatrix symplectic_generators() const;
    /// The code with X and Z roles exchanged (hx <-> hz, logical X <-> Z).
    StabilizerCode css_dual() const;

   private:
    bool css_ = false;
};

/// Throws InconsistentCode if generators fail to commute, the rank is not
/// n - k, or the logical operators lack the canonical commutation pattern.
void validate(const StabilizerCode &code);

struct Logicals {
    std::vector<PauliString> x;
    std::vector<PauliString> z;
};

/// Symplectic basis of the normalizer modulo the stabilizer. For CSS codes
/// the logical X's are X-type and the logical Z's Z-type. Each representative
/// is reduced to minimum weight (ties broken lexicographically) when the
/// stabilizer is small enough to enumerate.
Logicals derive_logicals(const StabilizerCode &code);

/// Minimum-weight element of p times the stabilizer group (CSS: the group
/// generated by the checks of the matching type). Sign is dropped.
PauliString canonical_representative(const StabilizerCode &code, const PauliString &p);

/// Exact X and Z distances of a CSS code by codeword enumeration.
/// d_x is the minimum weight of an X-type logical, d_z of a Z-type one.
std::pair<size_t, size_t> css_distance(const StabilizerCode &code, size_t max_log2_enumeration = 26);

/// Brute-force distance for any stabilizer code with n <= 12.
size_t brute_force_distance(const StabilizerCode &code);

/// True iff p commutes with all generators.
bool in_normalizer(const StabilizerCode &code, const PauliString &p);
/// True iff p (ignoring sign) lies in the stabilizer group.
bool in_stabilizer_group(const StabilizerCode &code, const PauliString &p);

StabilizerCode apply_permutation(const StabilizerCode &code, std::span<const size_t> perm);

/// Induced action on logical operators. Column j of `matrix` is the image of
/// basis element j in the ordering (X_1..X_k, Z_1..Z_k), written in the same
/// basis. `signs[j]` is set when the image carries a -1 relative to the
/// product of basis representatives times a stabilizer.
struct LogicalAction {
    BitMatrix matrix;
    BitVec signs;
    bool operator==(const LogicalAction &other) const = default;
};

/// Throws NotAnAutomorphism if perm does not map the stabilizer group onto itself.
LogicalAction logical_action_of_permutation(const StabilizerCode &code, std::span<const size_t> perm);
bool is_automorphism(const StabilizerCode &code, std::span<const size_t> perm);
/// M^T Omega M == Omega for Omega = [[0, I], [I, 0]].
bool is_symplectic(const BitMatrix &m);

/// Coordinates of a logical operator in the (X_1..X_k, Z_1..Z_k) basis.
BitVec logical_coordinates(const StabilizerCode &code, const PauliString &p);

/// Text form: header "n k d" (d is '?' when unknown), one generator per line,
/// a line "--", then "X<i> <letters>" / "Z<i> <letters>" logical rows.
std::string to_text(const StabilizerCode &code);
StabilizerCode from_text(const std::string &text, const std::string &name = "");

}  // namespace iceberg

#endif
