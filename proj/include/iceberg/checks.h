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

#ifndef ICEBERG_CHECKS_H
#define ICEBERG_CHECKS_H

#include <string>
#include <vector>

namespace iceberg {

/// Outcome of one exact check.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// css_distance of every CSS catalog code equals the distance in its name;
/// brute force for the small non-CSS inputs.
CheckResult check_code_distances();
/// Method-1 and method-2 Iceberg concatenation agree on [[4,2,2]] and
/// disagree on the [[12,2,4]] tower.
CheckResult check_concatenation_methods();
/// Bit-flip fault counts of [[36,2,8]]: n_logical[5] and n_reject[4].
CheckResult check_c3628_counts(size_t workers);
/// Critical p_R/p_L ratios at (0.01, 0.05), (0.01, 0.10), (0.01, 0.01).
CheckResult check_budget_constants();
/// Noiseless encoders, verified preps, teleportation EC, teleported CNOT
/// and targeted CNOT schedules act as declared (stabilizer simulation).
CheckResult check_gadget_identities();
/// Exhaustive single-fault injection over every shipped prep finds no bad
/// accepted state; pair injection over the |0^k> preps of `pair_codes`
/// finds some in total.
CheckResult check_prep_injection(const std::vector<std::string> &pair_codes, size_t workers);
/// Each `<name>.txt` in `dir` (text format) has the stabilizer group and
/// distance of the catalog code of that name.
std::vector<CheckResult> check_catalog_files(const std::string &dir);

/// The exact-check suite; `slow` adds the minute-scale enumerations.
std::vector<CheckResult> exact_checks(bool slow, size_t workers);

}  // namespace iceberg

#endif
