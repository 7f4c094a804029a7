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

#include <algorithm>
#include <cstdlib>
#include <string>

#include "tfspa/attack.hpp"

namespace tfspa {

namespace {

constexpr std::array<std::uint8_t, 256> make_mask_order() {
    std::array<std::uint8_t, 256> order{};
    std::size_t pos = 0;
    for (int weight = 0; weight <= 8; ++weight)
        for (int h = 0; h < 256; ++h)
            if (std::popcount(static_cast<unsigned>(h)) == weight)
                order[pos++] = static_cast<std::uint8_t>(h);
    return order;
}

constexpr std::array<std::size_t, 9> make_prefix_sizes() {
    std::array<std::size_t, 9> sizes{};
    std::size_t total = 0;
    for (int weight = 0; weight <= 8; ++weight) {
        for (int h = 0; h < 256; ++h)
            if (std::popcount(static_cast<unsigned>(h)) == weight)
                ++total;
        sizes[weight] = total;
    }
    return sizes;
}

constexpr auto kMaskOrder = make_mask_order();
constexpr auto kPrefixSizes = make_prefix_sizes();

void check_tau(int tau) {
    if (tau < 0 || tau > kMaxTau)
        throw std::invalid_argument("tau out of range 0..8: " + std::to_string(tau));
}

struct ObjectiveTerms {
    std::array<int, kEquations> measured_v{};
    std::array<int, kEquations> measured_w{};
    const Permutation *next_box = nullptr;
};

ObjectiveTerms objective_terms(const MeasuredSystem &system, const HammingTrace &trace) {
    ObjectiveTerms t;
    const int prev = system.round - 1;
    t.next_box = &detail::q_unchecked(system.row, prev);
    for (int r = 0; r < kEquations; ++r) {
        t.measured_v[r] = system.rhs[r];
        t.measured_w[r] = round_measurement(trace.hw(system.subkey(r), system.row, prev));
    }
    return t;
}

int evaluate(const MeasuredSystem &system, const ObjectiveTerms &t, std::uint8_t candidate) {
    int total = 0;
    for (int r = 0; r < kEquations; ++r) {
        const auto v = static_cast<std::uint8_t>(system.known_w[r] ^ candidate);
        total += std::abs(hamming(v) - t.measured_v[r]);
        total += std::abs(hamming((*t.next_box)[v]) - t.measured_w[r]);
    }
    return total;
}

} // namespace

const std::array<std::uint8_t, 256> &mask_order() noexcept { return kMaskOrder; }

std::size_t mask_prefix_size(int tau) {
    check_tau(tau);
    return kPrefixSizes[tau];
}

std::vector<std::uint8_t> mask_candidates(std::uint8_t estimate, int tau) {
    const std::size_t n = mask_prefix_size(tau);
    std::vector<std::uint8_t> out(n);
    for (std::size_t p = 0; p < n; ++p)
        out[p] = estimate ^ kMaskOrder[p];
    return out;
}

int mask_objective(const MeasuredSystem &system, const HammingTrace &trace,
                   std::uint8_t candidate) {
    return evaluate(system, objective_terms(system, trace), candidate);
}

MaskCorrection mask_correct(std::uint8_t estimate, const MeasuredSystem &system,
                            const HammingTrace &trace, int tau) {
    const std::size_t n = mask_prefix_size(tau);
    const ObjectiveTerms terms = objective_terms(system, trace);
    MaskCorrection best{estimate, evaluate(system, terms, estimate), 0};
    for (std::size_t p = 1; p < n; ++p) {
        const auto candidate = static_cast<std::uint8_t>(estimate ^ kMaskOrder[p]);
        const int objective = evaluate(system, terms, candidate);
        if (objective < best.objective)
            best = {candidate, objective, hamming(kMaskOrder[p])};
    }
    return best;
}

MaskCorrection mask_correct(std::uint8_t estimate, int j, int k, Parity parity,
                            const KnownBytes &known_w, const HammingTrace &trace, int tau) {
    return mask_correct(estimate, build_system(trace, known_w, j, k, parity), trace, tau);
}

} // namespace tfspa
