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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfspa/schedule.hpp"

namespace tfspa {

/// Additive zero-mean Gaussian error on every Hamming sample.
struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const NoiseModel &, const NoiseModel &) = default;
};

/**
 * Noisy Hamming weights of v(i,j,k) and w(i,j,k) for k in 0..R-1.
 *
 * The k = R stage is not stored: v(i,j,R) = i is public and w(i,j,R)
 * follows from it. Values are laid out row-major over (i, j, k).
 * The noise model is bookkeeping only; attacks never read it.
 */
class HammingTrace {
  public:
    HammingTrace() : HammingTrace(128) {}
    /// Zero-filled trace; throws std::invalid_argument for unsupported sizes.
    explicit HammingTrace(int key_bits, NoiseModel noise = {});

    [[nodiscard]] int key_bits() const noexcept { return key_bits_; }
    [[nodiscard]] int rounds() const noexcept { return rounds_; }
    [[nodiscard]] const NoiseModel &noise() const noexcept { return noise_; }
    /// Number of samples in each of hv and hw.
    [[nodiscard]] std::size_t samples() const noexcept { return hv_.size(); }

    [[nodiscard]] std::size_t index(int i, int j, int k) const noexcept {
        return (static_cast<std::size_t>(i) * kRows + static_cast<std::size_t>(j)) * rounds_ + k;
    }
    [[nodiscard]] double hv(int i, int j, int k) const noexcept { return hv_[index(i, j, k)]; }
    [[nodiscard]] double hw(int i, int j, int k) const noexcept { return hw_[index(i, j, k)]; }
    double &hv(int i, int j, int k) noexcept { return hv_[index(i, j, k)]; }
    double &hw(int i, int j, int k) noexcept { return hw_[index(i, j, k)]; }

    [[nodiscard]] const std::vector<double> &hv_values() const noexcept { return hv_; }
    [[nodiscard]] const std::vector<double> &hw_values() const noexcept { return hw_; }
    std::vector<double> &hv_values() noexcept { return hv_; }
    std::vector<double> &hw_values() noexcept { return hw_; }

    friend bool operator==(const HammingTrace &, const HammingTrace &) = default;

  private:
    int key_bits_;
    int rounds_;
    NoiseModel noise_;
    std::vector<double> hv_;
    std::vector<double> hw_;
};

/**
 * Samples hamming(v) + e and hamming(w) + e with independent e ~ N(0, sigma^2).
 *
 * Draws come from std::mt19937_64 seeded with noise.seed: all hv entries in
 * row-major order first, then all hw entries. Throws std::invalid_argument
 * for negative or non-finite sigma.
 */
HammingTrace simulate_trace(const SecretKey &key, NoiseModel noise);

/// Seed of reading r in a multi-reading capture: base_seed + r (mod 2^64).
constexpr std::uint64_t reading_seed(std::uint64_t base_seed, std::size_t reading) noexcept {
    return base_seed + static_cast<std::uint64_t>(reading);
}

/// n independent readings of one key; reading r uses reading_seed(base_seed, r).
std::vector<HammingTrace> multi_trace(const SecretKey &key, double sigma, std::size_t n,
                                      std::uint64_t base_seed);

/// Parse failure in a trace file; field() names the offending header field or section.
class TraceFormatError : public std::runtime_error {
  public:
    TraceFormatError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Magic string and version tag at the start of every trace file.
inline constexpr const char *kTraceMagic = "TFSPA1";

/**
 * Text container:
 *
 *     TFSPA1 <key_bits> <R> <sigma> <seed>
 *     V:
 *     <40*4*R values, row-major (i, j, k), one per line>
 *     W:
 *     <same layout>
 *
 * Reals are written as C-locale %.17g, which round-trips doubles exactly.
 */
void write_trace(const HammingTrace &trace, std::ostream &out);
void write_trace(const HammingTrace &trace, const std::filesystem::path &path);
HammingTrace read_trace(std::istream &in);
HammingTrace read_trace(const std::filesystem::path &path);

} // namespace tfspa
