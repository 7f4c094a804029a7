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

#include "tfspa/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace tfspa {

ExactAttackFailure::ExactAttackFailure(int row, int round, Parity parity)
    : std::runtime_error("no key byte satisfies the system at j=" + std::to_string(row) +
                         ", k=" + std::to_string(round) + ", parity=" +
                         std::string(to_string(parity))),
      row_(row), round_(round), parity_(parity) {}

namespace {

using Clock = std::chrono::steady_clock;

SecretKey blank_key(int rounds) {
    const std::array<std::uint8_t, 32> zeros{};
    return SecretKey(std::span<const std::uint8_t>(zeros.data(), static_cast<std::size_t>(8 * rounds)));
}

// Walks k = R .. 1. Each round solves the 8 (row, parity) systems against
// the currently known w(., ., k), then pushes the recovered bytes through
// the next S-box column to obtain w(., ., k-1).
template <typename SolveByte>
AttackReport run_rounds(const HammingTrace &trace, SolveByte &&solve) {
    const int rounds = trace.rounds();
    AttackReport report{blank_key(rounds), std::vector<ByteDiagnostics>(8 * rounds)};

    std::array<std::array<std::uint8_t, kRows>, kSubkeyCount> w_known{};
    for (int i = 0; i < kSubkeyCount; ++i)
        for (int j = 0; j < kRows; ++j)
            w_known[i][j] = detail::q_unchecked(j, rounds)[static_cast<std::uint8_t>(i)];

    for (int k = rounds; k >= 1; --k) {
        for (int j = 0; j < kRows; ++j) {
            for (Parity parity : {Parity::even, Parity::odd}) {
                KnownBytes known{};
                for (int r = 0; r < kEquations; ++r)
                    known[r] = w_known[2 * r + static_cast<int>(parity)][j];
                const MeasuredSystem system = build_system(trace, known, j, k, parity);
                const int l = system.key_byte();
                report.key_estimate.set(l, solve(system, report.per_byte[l], report));
            }
        }
        for (int i = 0; i < kSubkeyCount; ++i)
            for (int j = 0; j < kRows; ++j) {
                const auto v = static_cast<std::uint8_t>(
                    w_known[i][j] ^ report.key_estimate[detail::key_byte_unchecked(i, j, k)]);
                w_known[i][j] = detail::q_unchecked(j, k - 1)[v];
            }
    }
    return report;
}

} // namespace

AttackReport attack_exact(const HammingTrace &trace) {
    const auto start = Clock::now();
    AttackReport report =
        run_rounds(trace, [](const MeasuredSystem &system, ByteDiagnostics &diag, AttackReport &) {
            const ByteGuess guess = break_key_byte_exact(system);
            if (!guess.found)
                throw ExactAttackFailure(system.row, system.round, system.parity);
            diag.solver_tier = SolverTier::exact;
            return guess.byte;
        });
    report.elapsed = Clock::now() - start;
    return report;
}

AttackReport attack_noisy(const HammingTrace &trace, int tau) {
    if (tau < 0 || tau > kMaxTau)
        throw std::invalid_argument("tau out of range 0..8: " + std::to_string(tau));
    const auto start = Clock::now();
    AttackReport report = run_rounds(
        trace, [&trace, tau](const MeasuredSystem &system, ByteDiagnostics &diag,
                             AttackReport &rep) {
            const LmsEstimate lms = lms_estimate(system);
            if (lms.rank_deficient)
                ++rep.rank_deficient_systems;
            const MaskCorrection fix = mask_correct(lms.byte, system, trace, tau);
            diag.lms_rounding_distance = lms.rounding_distance;
            diag.mask_weight_used = fix.mask_weight;
            diag.objective_value = fix.objective;
            diag.solver_tier = tau == 0 ? SolverTier::lms : SolverTier::lms_mask;
            return fix.byte;
        });
    report.tau = tau;
    report.elapsed = Clock::now() - start;
    return report;
}

double key_distance(const SecretKey &a, const SecretKey &b) {
    if (a.size() != b.size())
        throw std::invalid_argument("key estimates differ in size");
    double sum = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        const double d = static_cast<double>(a[l]) - static_cast<double>(b[l]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::vector<std::vector<std::size_t>> cluster_estimates(std::span<const SecretKey> estimates,
                                                        double radius) {
    const std::size_t n = estimates.size();
    for (const SecretKey &k : estimates)
        if (k.size() != estimates.front().size())
            throw std::invalid_argument("all estimates must share one key size");

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (key_distance(estimates[a], estimates[b]) <= radius) {
                const std::size_t ra = find(a);
                const std::size_t rb = find(b);
                if (ra != rb)
                    parent[std::max(ra, rb)] = std::min(ra, rb);
            }

    // Clusters ordered by their smallest member, members ascending.
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t root = find(x);
        if (slot[root] == n) {
            slot[root] = clusters.size();
            clusters.emplace_back();
        }
        clusters[slot[root]].push_back(x);
    }
    return clusters;
}

namespace {

struct Vote {
    std::uint8_t value = 0;
    std::size_t reading = 0;
};

// Strict plurality winner of byte l, if any.
bool plurality(const std::vector<AttackReport> &runs, std::size_t l, Vote &winner) {
    std::array<int, 256> counts{};
    for (const AttackReport &r : runs)
        ++counts[r.key_estimate[l]];
    const int top = *std::max_element(counts.begin(), counts.end());
    if (std::count(counts.begin(), counts.end(), top) != 1)
        return false;
    for (std::size_t p = 0; p < runs.size(); ++p)
        if (counts[runs[p].key_estimate[l]] == top) {
            winner = {runs[p].key_estimate[l], p};
            return true;
        }
    return false;
}

Vote break_tie(const std::vector<AttackReport> &runs, std::size_t l) {
    std::array<int, 256> counts{};
    for (const AttackReport &r : runs)
        ++counts[r.key_estimate[l]];
    const int top = *std::max_element(counts.begin(), counts.end());

    auto rank = [&runs, l](std::size_t p) {
        const ByteDiagnostics &d = runs[p].per_byte[l];
        return std::make_tuple(d.objective_value, d.mask_weight_used, d.lms_rounding_distance,
                               runs[p].key_estimate[l], p);
    };
    std::size_t best = runs.size();
    for (std::size_t p = 0; p < runs.size(); ++p) {
        if (counts[runs[p].key_estimate[l]] != top)
            continue;
        if (best == runs.size() || rank(p) < rank(best))
            best = p;
    }
    return {runs[best].key_estimate[l], best};
}

} // namespace

AttackReport attack_multi(std::span<const HammingTrace> readings, int tau, int max_readings) {
    if (readings.empty())
        throw std::invalid_argument("attack_multi needs at least one reading");
    if (max_readings < 1)
        throw std::invalid_argument("max_readings must be at least 1");
    for (const HammingTrace &t : readings)
        if (t.key_bits() != readings.front().key_bits())
            throw std::invalid_argument("all readings must share one key size");

    const auto start = Clock::now();
    const std::size_t limit = std::min(readings.size(), static_cast<std::size_t>(max_readings));
    std::vector<AttackReport> runs;
    runs.reserve(limit);

    auto assemble = [&runs, tau](const std::vector<Vote> &votes) {
        AttackReport out{runs.front().key_estimate, runs.front().per_byte};
        for (std::size_t l = 0; l < votes.size(); ++l) {
            out.key_estimate.set(l, votes[l].value);
            out.per_byte[l] = runs[votes[l].reading].per_byte[l];
        }
        out.tau = tau;
        out.readings_used = static_cast<int>(runs.size());
        for (const AttackReport &r : runs)
            out.rank_deficient_systems += r.rank_deficient_systems;
        return out;
    };

    for (std::size_t c = 0; c < limit; ++c) {
        runs.push_back(attack_noisy(readings[c], tau));
        if (runs.size() < 2)
            continue;
        const std::size_t bytes = runs.front().key_estimate.size();
        std::vector<Vote> votes(bytes);
        bool decided = true;
        for (std::size_t l = 0; l < bytes && decided; ++l)
            decided = plurality(runs, l, votes[l]);
        if (decided) {
            AttackReport out = assemble(votes);
            out.elapsed = Clock::now() - start;
            return out;
        }
    }

    const std::size_t bytes = runs.front().key_estimate.size();
    std::vector<Vote> votes(bytes);
    for (std::size_t l = 0; l < bytes; ++l)
        if (!plurality(runs, l, votes[l]))
            votes[l] = break_tie(runs, l);
    AttackReport out = assemble(votes);
    out.elapsed = Clock::now() - start;
    return out;
}

} // namespace tfspa
