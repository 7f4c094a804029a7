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

#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "tfspa/schedule.hpp"
#include "tfspa/tracesim.hpp"

namespace tfspa {

/// Equations per parity system: the 20 subkey indices sharing one key byte.
inline constexpr int kEquations = kSubkeyCount / 2;
inline constexpr int kMaxTau = 8;

enum class Parity : std::uint8_t { even = 0, odd = 1 };
enum class SolverTier : std::uint8_t { exact, lms, lms_mask };

std::string_view to_string(Parity p) noexcept;
std::string_view to_string(SolverTier t) noexcept;

/// w(i, j, k) for the 20 subkeys i = 2r + parity, r = 0..19.
using KnownBytes = std::array<std::uint8_t, kEquations>;

/// Nearest integer (halves away from zero) clamped to the Hamming range 0..8.
int round_measurement(double x) noexcept;

/**
 * One 20x8 Hamming system H(v(i,j,k-1)) = H(w(i,j,k) ^ m_l) for a fixed
 * row, round and parity. Row r of every array corresponds to subkey
 * i = 2r + parity.
 */
struct MeasuredSystem {
    int row = 0;
    int round = 1;
    Parity parity = Parity::even;
    KnownBytes known_w{};
    /// Bits of known_w, d[r][n] = (known_w[r] >> n) & 1.
    std::array<std::array<std::uint8_t, 8>, kEquations> d{};
    /// Signs a = 1 - 2d of the linearised system.
    std::array<std::array<std::int8_t, 8>, kEquations> a{};
    /// Rounded, clamped H*(v(i,j,k-1)).
    std::array<int, kEquations> rhs{};
    std::array<double, kEquations> rhs_raw{};

    [[nodiscard]] int subkey(int r) const noexcept { return 2 * r + static_cast<int>(parity); }
    /// Index of the key byte this system solves for.
    [[nodiscard]] int key_byte() const noexcept {
        return detail::key_byte_unchecked(static_cast<int>(parity), row, round);
    }
};

/// Throws std::invalid_argument when (j, k) is outside the trace's rounds.
MeasuredSystem build_system(const HammingTrace &trace, const KnownBytes &known_w, int j, int k,
                            Parity parity);

struct ByteGuess {
    std::uint8_t byte = 0;
    bool found = false;
};

/// Smallest m with H(w ^ m) == rhs on all 20 rows; found = false when none fits.
ByteGuess break_key_byte_exact(const MeasuredSystem &system);

struct LmsEstimate {
    std::uint8_t byte = 0;
    /// L2 distance between the real least-squares solution and its 0/1 rounding.
    double rounding_distance = 0.0;
    std::array<double, 8> solution{};
    /// A^T A was singular and the solve used the ridge term.
    bool rank_deficient = false;
};

/// Ridge added to the normal equations when A^T A is singular.
inline constexpr double kRidgeLambda = 1e-9;

/// Least-squares solve of A x = rhs - H(known_w), then per-bit clamp(round(x)).
LmsEstimate lms_estimate(const MeasuredSystem &system);

/// All 256 masks sorted by (Hamming weight, value).
const std::array<std::uint8_t, 256> &mask_order() noexcept;
/// Number of masks with weight <= tau: sum_{n<=tau} C(8, n).
std::size_t mask_prefix_size(int tau);
/// estimate ^ h for every mask h of weight <= tau, in mask_order().
std::vector<std::uint8_t> mask_candidates(std::uint8_t estimate, int tau);

struct MaskCorrection {
    std::uint8_t byte = 0;
    int objective = 0;
    int mask_weight = 0;
};

/**
 * Combined residual of a candidate byte c over the 20 rows of the system:
 * |H(w ^ c) - H*(v(i,j,k-1))| + |H(Q_{j,k-1}(w ^ c)) - H*(w(i,j,k-1))|.
 */
int mask_objective(const MeasuredSystem &system, const HammingTrace &trace, std::uint8_t candidate);

/// First candidate in mask order that minimises mask_objective().
MaskCorrection mask_correct(std::uint8_t estimate, const MeasuredSystem &system,
                            const HammingTrace &trace, int tau);
MaskCorrection mask_correct(std::uint8_t estimate, int j, int k, Parity parity,
                            const KnownBytes &known_w, const HammingTrace &trace, int tau);

struct ByteDiagnostics {
    double lms_rounding_distance = 0.0;
    int mask_weight_used = 0;
    int objective_value = 0;
    SolverTier solver_tier = SolverTier::exact;
};

struct AttackReport {
    SecretKey key_estimate;
    /// Indexed by key byte l.
    std::vector<ByteDiagnostics> per_byte;
    std::chrono::duration<double> elapsed{};
    int tau = 0;
    int readings_used = 1;
    /// Systems whose normal equations needed the ridge fallback.
    int rank_deficient_systems = 0;
};

/// Raised by attack_exact when some system has no consistent key byte.
class ExactAttackFailure : public std::runtime_error {
  public:
    ExactAttackFailure(int row, int round, Parity parity);
    [[nodiscard]] int row() const noexcept { return row_; }
    [[nodiscard]] int round() const noexcept { return round_; }
    [[nodiscard]] Parity parity() const noexcept { return parity_; }

  private:
    int row_;
    int round_;
    Parity parity_;
};

/// Error-free recovery: exhaustive byte search, round by round from k = R down to 1.
AttackReport attack_exact(const HammingTrace &trace);

/// LMS estimate per byte followed by mask correction with weight <= tau (none for tau = 0).
AttackReport attack_noisy(const HammingTrace &trace, int tau);

/// Euclidean distance between byte vectors; throws std::invalid_argument on size mismatch.
double key_distance(const SecretKey &a, const SecretKey &b);

// Just under the 0.1th percentile (~219) of distances between independent
// random 128-bit keys. About 98% of sigma = 1.0 estimates that miss one or
// two bytes land inside it; the rest overlap the random-pair tail.
inline constexpr double kClusterRadius = 215.0;

/// Single-linkage groups of estimate indices joined at distance <= radius.
std::vector<std::vector<std::size_t>> cluster_estimates(std::span<const SecretKey> estimates,
                                                        double radius = kClusterRadius);

/**
 * Per-byte vote over independent attack_noisy runs of the same key.
 *
 * Readings are consumed one at a time. From the second on, the run stops
 * as soon as every byte has a strict plurality. Once max_readings (or the
 * supplied readings) are exhausted, tied bytes go to the tied value whose
 * best reading has the smallest objective, then the smallest mask weight,
 * then the smallest LMS rounding distance.
 */
AttackReport attack_multi(std::span<const HammingTrace> readings, int tau, int max_readings = 5);

/// Plain-text report: recovered key in hex, run summary, then one diagnostics row per key byte.
void write_attack_report(const AttackReport &report, std::ostream &out);

} // namespace tfspa
