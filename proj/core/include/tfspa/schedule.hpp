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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace tfspa {

/// Number of 32-bit subkeys produced by the key schedule.
inline constexpr int kSubkeyCount = 40;
/// Bytes per 32-bit word, i.e. rows of the h-function.
inline constexpr int kRows = 4;
/// Largest number of key-dependent h rounds (256-bit keys).
inline constexpr int kMaxRounds = 4;
/// Columns of the S-box selector matrix: kMaxRounds keyed stages plus the final stage.
inline constexpr int kStages = kMaxRounds + 1;

using Permutation = std::array<std::uint8_t, 256>;

/**
 * The 8R key bytes m_0 .. m_{8R-1}, R in {2, 3, 4}.
 *
 * Byte m_l is the one consumed at row j, round k of subkey i where
 * l = 8(k-1) + j + 4(i mod 2). Relative to the cipher's native byte string
 * this numbers the bytes of each 32-bit word big-endian; see
 * from_cipher_bytes() / cipher_bytes() for the conversion.
 */
class SecretKey {
  public:
    /// All-zero 128-bit key.
    SecretKey() : SecretKey(std::span<const std::uint8_t>(std::array<std::uint8_t, 16>{})) {}
    /// Throws std::invalid_argument unless bytes.size() is 16, 24 or 32.
    explicit SecretKey(std::span<const std::uint8_t> bytes);

    /// Parses 32, 48 or 64 hex digits; byte order as in the constructor.
    static SecretKey from_hex(std::string_view hex);
    /// Pads a short key with zero bytes up to the next supported length.
    static SecretKey zero_padded(std::span<const std::uint8_t> bytes);
    /// Builds a key from the cipher's native byte string (little-endian words).
    static SecretKey from_cipher_bytes(std::span<const std::uint8_t> bytes);

    [[nodiscard]] int key_bits() const noexcept { return static_cast<int>(size_) * 8; }
    [[nodiscard]] int rounds() const noexcept { return static_cast<int>(size_) / 8; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept {
        return {bytes_.data(), size_};
    }
    [[nodiscard]] std::uint8_t operator[](std::size_t l) const noexcept { return bytes_[l]; }
    void set(std::size_t l, std::uint8_t value) noexcept { bytes_[l] = value; }

    [[nodiscard]] std::string to_hex() const;
    /// Native cipher byte string, the inverse of from_cipher_bytes().
    [[nodiscard]] std::array<std::uint8_t, 32> cipher_bytes() const noexcept;

    friend bool operator==(const SecretKey &a, const SecretKey &b) noexcept {
        return a.size_ == b.size_ && a.bytes_ == b.bytes_;
    }

  private:
    std::array<std::uint8_t, 32> bytes_{};
    std::size_t size_ = 0;
};

/// Throws std::invalid_argument unless bits is 128, 192 or 256.
int rounds_for_key_bits(int bits);

/// Population count of a byte.
constexpr int hamming(std::uint8_t x) noexcept { return std::popcount(x); }

const Permutation &q0() noexcept;
const Permutation &q1() noexcept;

/**
 * Selector bit P[j][k]: 0 picks q0, 1 picks q1.
 *
 * Column k is the h-function round index, so k = 0 is the final
 * (rightmost) substitution and larger keys add columns k = 3, 4 on the
 * input side without touching the existing ones.
 */
int selector_bit(int j, int k);

/// Q_{jk}; throws std::invalid_argument for j outside 0..3 or k outside 0..4.
const Permutation &q_select(int j, int k);

/// l(i, j, k) = 8(k-1) + j + 4(i mod 2); throws std::invalid_argument on range errors.
int key_byte_index(int i, int j, int k, int rounds = kMaxRounds);

namespace detail {
inline constexpr std::array<std::array<std::uint8_t, kStages>, kRows> kSelector = {{
    {0, 1, 1, 0, 1},
    {1, 1, 0, 0, 0},
    {0, 0, 1, 1, 0},
    {1, 0, 0, 1, 1},
}};
const Permutation &q_unchecked(int j, int k) noexcept;
constexpr int key_byte_unchecked(int i, int j, int k) noexcept {
    return 8 * (k - 1) + j + 4 * (i & 1);
}
} // namespace detail

/**
 * Byte values before (v) and after (w) every S-box of the h-function chain.
 *
 * Indexed [i][j][k] for subkey i in 0..39, row j in 0..3, round k in 0..R:
 * v(i,j,R) = i, w(i,j,k) = Q_{jk}(v(i,j,k)) and v(i,j,k-1) = w(i,j,k) ^ m_l.
 */
class ScheduleIntermediates {
  public:
    explicit ScheduleIntermediates(int rounds) : rounds_(rounds) {}

    [[nodiscard]] int rounds() const noexcept { return rounds_; }
    [[nodiscard]] std::uint8_t v(int i, int j, int k) const noexcept { return v_[i][j][k]; }
    [[nodiscard]] std::uint8_t w(int i, int j, int k) const noexcept { return w_[i][j][k]; }
    std::uint8_t &v(int i, int j, int k) noexcept { return v_[i][j][k]; }
    std::uint8_t &w(int i, int j, int k) noexcept { return w_[i][j][k]; }

    friend bool operator==(const ScheduleIntermediates &,
                           const ScheduleIntermediates &) = default;

  private:
    using Grid = std::array<std::array<std::array<std::uint8_t, kStages>, kRows>, kSubkeyCount>;
    int rounds_;
    Grid v_{};
    Grid w_{};
};

ScheduleIntermediates compute_intermediates(const SecretKey &key);

/// Expanded key K_0 .. K_39 (MDS, rotations and PHT applied to the h outputs).
std::array<std::uint32_t, kSubkeyCount> derive_subkeys(const SecretKey &key);

/// Deterministic listing of q0, q1 and the selector matrix.
void dump_tables(std::ostream &out);

} // namespace tfspa
