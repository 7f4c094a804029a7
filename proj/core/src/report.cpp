/*
 * SPDX-FileCopyrightText: Copyright 2026 The tfspa Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <ostream>
#include <string>

#include "tfspa/attack.hpp"

namespace tfspa {

void write_attack_report(const AttackReport &report, std::ostream &out) {
    char line[128];
    out << "key_bits: " << report.key_estimate.key_bits() << '\n';
    out << "key: " << report.key_estimate.to_hex() << '\n';
    out << "tau: " << report.tau << '\n';
    out << "readings_used: " << report.readings_used << '\n';
    out << "rank_deficient_systems: " << report.rank_deficient_systems << '\n';
    std::snprintf(line, sizeof line, "elapsed_s: %.9f\n", report.elapsed.count());
    out << line;
    out << "\nbyte  value  tier      lms_distance  mask_weight  objective\n";
    for (std::size_t l = 0; l < report.per_byte.size(); ++l) {
        const ByteDiagnostics &d = report.per_byte[l];
        std::snprintf(line, sizeof line, "%4zu  0x%02x   %-8s  %12.6f  %11d  %9d\n", l,
                      static_cast<unsigned>(report.key_estimate[l]),
                      std::string(to_string(d.solver_tier)).c_str(), d.lms_rounding_distance,
                      d.mask_weight_used, d.objective_value);
        out << line;
    }
}

} // namespace tfspa
