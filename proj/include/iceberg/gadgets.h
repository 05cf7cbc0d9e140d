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

#ifndef ICEBERG_GADGETS_H
#define ICEBERG_GADGETS_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iceberg/circuit.h"
#include "iceberg/frame_sim.h"
#include "iceberg/gf2.h"
#include "iceberg/stabilizer_code.h"

namespace iceberg {

struct SynthesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Logical basis state prepared by an encoder: |0^k>_L or |+^k>_L.
enum class Basis { Zero, Plus };
const char *to_string(Basis b);

/// Concatenated presentation code = concatenate(outer, inner) used by the
/// block encoder. `inner` is a catalog name.
struct BlockStructure {
    StabilizerCode outer;
    std::string inner;
};

/// Block structure of a catalog code, if it has one. The presentation has
/// the same stabilizer group and logical operators as catalog(name).
std::optional<BlockStructure> block_structure(const std::string &name);

/// One transversal round of block CNOTs: control-block qubit q drives
/// target-block qubit perm[q].
struct BlockRound {
    uint32_t control_block;
    uint32_t target_block;
    std::vector<uint32_t> perm;
};

/// Encoding circuit. Register "q" holds the code qubits; register "aux"
/// (possibly empty) holds qubits of inner verification blocks.
struct EncoderRecipe {
    std::string code;
    Basis basis = Basis::Zero;
    bool block_mode = false;
    /// Plain mode: qubits prepared in |+>. Block mode: blocks prepared in |+^k>.
    std::vector<uint32_t> pivots;
    std::vector<BlockRound> rounds;
    Circuit circuit;
};

/// Generalized Steane encoder on a CSS code: row-reduce the X checks (plus
/// the X logicals for |+^k>), prepare pivots in |+> and the rest in |0>,
/// and fan out each row from its pivot.
EncoderRecipe synthesize_encoder(const StabilizerCode &code, Basis basis);

/// Block encoder for a catalog code with a block structure: inner blocks
/// prepared in |+^k> (pivot blocks) or |0^k>, then transversal block CNOTs
/// whose target permutations realize the required logical copy maps. When
/// `verified_inner` is set the inner states come from verified preps.
EncoderRecipe synthesize_block_encoder(const std::string &name, Basis basis, bool verified_inner);

/// Default encoder of a catalog code (block mode when possible). Cached.
const EncoderRecipe &catalog_encoder(const std::string &name, Basis basis);

/// Inner-code permutation whose logical X action sends X_l to
/// sum_m action[l][m] X_m. Searches qubit permutations that respect the
/// inner block structure; throws SynthesisError when none is found.
std::vector<uint32_t> permutation_for_x_action(const std::string &name, const BitMatrix &action);
/// Distinct logical X actions of all permutation automorphisms found by the
/// structured search.
std::vector<BitMatrix> realizable_x_actions(const std::string &name);
/// Logical X action (row l = image of X_l) of a CSS automorphism.
BitMatrix x_action_of_permutation(const StabilizerCode &code, const std::vector<uint32_t> &perm);

/// How a prepared block is checked before use.
///  Heavy: four encoded blocks A, B, C, D. B checks A and D checks C for
///    errors of the type that flips the prepared logicals; C then checks A
///    for the other type.
///  Light: three blocks; C checks A for the second type first, then B checks
///    A for the first type.
enum class VerifyVariant { None, Light, Heavy };
const char *to_string(VerifyVariant v);

struct VerificationCheck {
    std::string kind;  // "compare" or "cross"
    uint32_t checked_block;
    uint32_t ancilla_block;
};

/// Verified preparation circuit. Register "out" holds the prepared block,
/// "aux" everything else.
struct PrepRecipe {
    std::string code;
    Basis basis = Basis::Zero;
    VerifyVariant variant = VerifyVariant::Heavy;
    bool staged = false;  // inner states verified separately (two-stage)
    std::vector<VerificationCheck> checks;
    Circuit circuit;
    /// Text header followed by the circuit text.
    std::string serialize() const;
};

/// Builds a verified prep from `encoder` (output on its register "q").
PrepRecipe attach_verification(const StabilizerCode &code, const EncoderRecipe &encoder, VerifyVariant variant);

/// Shipped prep recipe. Towers ([[36,2,8]], [[48,4,8]]) use verified inner
/// states. Cached.
const PrepRecipe &catalog_prep(const std::string &name, Basis basis, VerifyVariant variant = VerifyVariant::Heavy);
bool is_tower(const std::string &name);

/// Minimum weight of a frame modulo the group fixing the block: X errors
/// modulo X checks (plus X logicals for |+^k>), Z errors modulo Z checks
/// (plus Z logicals for |0^k>). Without a basis only the checks are
/// factored out. Weights above `cap` report cap + 1.
class ResidualWeigher {
   public:
    ResidualWeigher(const StabilizerCode &code, std::optional<Basis> basis, size_t cap);
    size_t x_weight(uint64_t x) const;
    size_t z_weight(uint64_t z) const;
    size_t weight(uint64_t x, uint64_t z) const { return std::max(x_weight(x), z_weight(z)); }

   private:
    struct Reducer {
        std::vector<uint64_t> basis;
        std::vector<int> pivots;
        uint64_t reduce(uint64_t v) const;
    };
    size_t weigh(const Reducer &r, const std::vector<std::vector<uint64_t>> &by_weight, uint64_t v) const;
    size_t cap_;
    Reducer rx_, rz_;
    std::vector<std::vector<uint64_t>> x_low_, z_low_;  // sorted reduced forms per weight
};

struct InjectionReport {
    uint64_t single_faults = 0;
    uint64_t single_accepted = 0;
    uint64_t single_bad = 0;  // accepted with residual weight >= threshold
    uint64_t pairs = 0;
    uint64_t pair_bad = 0;
    size_t threshold = 0;
    bool pairs_done = false;
};

/// Exhaustive fault injection into a prep: every single fault, and every
/// pair of faults when `with_pairs`. Bad means accepted with residual weight
/// at least ceil(d/2).
InjectionReport inject_prep_faults(const PrepRecipe &prep, bool with_pairs, size_t workers = 1);

/// Compiled prep, output = register "out". Cached per recipe and noise flags.
const CompiledCircuit &compiled_prep(const std::string &name, Basis basis,
                                     VerifyVariant variant = VerifyVariant::Heavy);

/// Teleportation EC on register "data" of n qubits: data hands its state to
/// a fresh |0^k> block (CNOT data->fresh, data measured in X, Z decoder),
/// which then hands it to a fresh |+^k> block (CNOT fresh->block, block
/// measured in Z, X decoder). The state ends on register "out".
struct EcGadget {
    Circuit circuit;
    std::vector<uint32_t> z_step_measurements;  // MX of data, qubit order
    std::vector<uint32_t> x_step_measurements;  // MZ of the middle block
};
EcGadget steane_ec_gadget(const std::string &name, VerifyVariant variant = VerifyVariant::None);

/// Bell pairs (|00>+|11>)^k between registers "a" and "b".
Circuit bell_prep(const std::string &name, VerifyVariant variant = VerifyVariant::None);

/// Teleported logical CNOT from register "c" to "t" through a Bell pair on
/// "a", "b": CNOT a->c, c measured in Z; CNOT t->b, t measured in X. The
/// control's state ends on "a", the target's on "b".
struct TeleportedCnotGadget {
    Circuit circuit;
    std::vector<uint32_t> control_measurements;  // MZ of c
    std::vector<uint32_t> target_measurements;   // MX of t
};
TeleportedCnotGadget teleported_cnot_gadget(const std::string &name, VerifyVariant variant = VerifyVariant::None);

/// Logical CNOT from logical qubit `control` of block "A" to logical qubit
/// `target` of block "B" out of transversal rounds with permuted targets.
struct TargetedCnotSchedule {
    std::vector<std::vector<uint32_t>> round_perms;  // target-block permutation per round
    std::vector<BitMatrix> round_actions;
    Circuit circuit;  // PERM / CNOT rounds; "EC" between rounds is left to callers
};
TargetedCnotSchedule targeted_cnot_schedule(const std::string &name, size_t control, size_t target);

/// Flagged measurement of X...X and Z...Z on an Iceberg block (c422 or c642)
/// with abort on any detection. Registers "data", "anc".
Circuit iceberg_detect_gadget(const std::string &name);

}  // namespace iceberg

#endif
