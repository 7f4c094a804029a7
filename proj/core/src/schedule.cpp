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

#include "tfspa/schedule.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tfspa {

namespace {

bool supported_size(std::size_t n) { return n == 16 || n == 24 || n == 32; }

int hex_nibble(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

// Within each 32-bit word the cipher stores byte 0 as the low byte while
// m_l counts from the high byte. The swap is its own inverse.
constexpr std::size_t swap_word_order(std::size_t pos) { return (pos & ~std::size_t{3}) | (3 - (pos & 3)); }

// GF(2^8) multiply modulo x^8 + x^6 + x^5 + x^3 + 1.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    unsigned x = a;
    unsigned r = 0;
    while (b != 0) {
        if (b & 1)
            r ^= x;
        x <<= 1;
        if (x & 0x100)
            x ^= 0x169;
        b >>= 1;
    }
    return static_cast<std::uint8_t>(r);
}

constexpr std::uint8_t kMds[4][4] = {
    {0x01, 0xEF, 0x5B, 0x5B},
    {0x5B, 0xEF, 0xEF, 0x01},
    {0xEF, 0x5B, 0x01, 0xEF},
    {0xEF, 0x01, 0xEF, 0x5B},
};

std::uint32_t mds_column(const std::array<std::uint8_t, 4> &y) {
    std::uint32_t z = 0;
    for (int r = 0; r < 4; ++r) {
        std::uint8_t acc = 0;
        for (int c = 0; c < 4; ++c)
            acc ^= gf_mul(kMds[r][c], y[c]);
        z |= std::uint32_t{acc} << (8 * r);
    }
    return z;
}

} // namespace

SecretKey::SecretKey(std::span<const std::uint8_t> bytes) {
    if (!supported_size(bytes.size()))
        throw std::invalid_argument("unsupported key size: " + std::to_string(bytes.size() * 8) +
                                    " bits (expected 128, 192 or 256)");
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
    size_ = bytes.size();
}

SecretKey SecretKey::from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("key hex must have an even number of digits");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t p = 0; p < hex.size(); p += 2) {
        const int hi = hex_nibble(hex[p]);
        const int lo = hex_nibble(hex[p + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex digit in key");
        bytes.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return SecretKey(bytes);
}

SecretKey SecretKey::zero_padded(std::span<const std::uint8_t> bytes) {
    if (bytes.empty() || bytes.size() > 32)
        throw std::invalid_argument("key must be 1 to 32 bytes before padding");
    std::size_t target = 16;
    while (target < bytes.size())
        target += 8;
    std::vector<std::uint8_t> padded(bytes.begin(), bytes.end());
    padded.resize(target, 0);
    return SecretKey(padded);
}

SecretKey SecretKey::from_cipher_bytes(std::span<const std::uint8_t> bytes) {
    if (!supported_size(bytes.size()))
        throw std::invalid_argument("unsupported key size: " + std::to_string(bytes.size() * 8) +
                                    " bits (expected 128, 192 or 256)");
    std::array<std::uint8_t, 32> reordered{};
    for (std::size_t p = 0; p < bytes.size(); ++p)
        reordered[swap_word_order(p)] = bytes[p];
    return SecretKey(std::span<const std::uint8_t>(reordered.data(), bytes.size()));
}

std::array<std::uint8_t, 32> SecretKey::cipher_bytes() const noexcept {
    std::array<std::uint8_t, 32> out{};
    for (std::size_t p = 0; p < size_; ++p)
        out[swap_word_order(p)] = bytes_[p];
    return out;
}

std::string SecretKey::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * size_);
    for (std::size_t l = 0; l < size_; ++l) {
        s.push_back(kDigits[bytes_[l] >> 4]);
        s.push_back(kDigits[bytes_[l] & 15]);
    }
    return s;
}

int rounds_for_key_bits(int bits) {
    if (bits != 128 && bits != 192 && bits != 256)
        throw std::invalid_argument("unsupported key size: " + std::to_string(bits));
    return bits / 64;
}

int selector_bit(int j, int k) {
    if (j < 0 || j >= kRows)
        throw std::invalid_argument("row index j out of range 0..3: " + std::to_string(j));
    if (k < 0 || k >= kStages)
        throw std::invalid_argument("round index k out of range 0..4: " + std::to_string(k));
    return detail::kSelector[j][k];
}

const Permutation &q_select(int j, int k) { return selector_bit(j, k) == 0 ? q0() : q1(); }

const Permutation &detail::q_unchecked(int j, int k) noexcept {
    return kSelector[j][k] == 0 ? q0() : q1();
}

int key_byte_index(int i, int j, int k, int rounds) {
    if (i < 0 || i >= kSubkeyCount)
        throw std::invalid_argument("subkey index i out of range 0..39: " + std::to_string(i));
    if (j < 0 || j >= kRows)
        throw std::invalid_argument("row index j out of range 0..3: " + std::to_string(j));
    if (rounds < 2 || rounds > kMaxRounds || k < 1 || k > rounds)
        throw std::invalid_argument("round index k out of range 1..R: " + std::to_string(k));
    return detail::key_byte_unchecked(i, j, k);
}

ScheduleIntermediates compute_intermediates(const SecretKey &key) {
    const int rounds = key.rounds();
    ScheduleIntermediates s(rounds);
    for (int i = 0; i < kSubkeyCount; ++i) {
        for (int j = 0; j < kRows; ++j) {
            s.v(i, j, rounds) = static_cast<std::uint8_t>(i);
            for (int k = rounds; k >= 0; --k) {
                s.w(i, j, k) = detail::q_unchecked(j, k)[s.v(i, j, k)];
                if (k > 0)
                    s.v(i, j, k - 1) = s.w(i, j, k) ^ key[detail::key_byte_unchecked(i, j, k)];
            }
        }
    }
    return s;
}

std::array<std::uint32_t, kSubkeyCount> derive_subkeys(const SecretKey &key) {
    const ScheduleIntermediates s = compute_intermediates(key);
    // Row j of the byte model feeds MDS input byte 3 - j.
    auto h_output = [&s](int i) {
        std::array<std::uint8_t, 4> y{};
        for (int b = 0; b < 4; ++b)
            y[b] = s.w(i, 3 - b, 0);
        return mds_column(y);
    };
    std::array<std::uint32_t, kSubkeyCount> out{};
    for (int n = 0; n < kSubkeyCount / 2; ++n) {
        const std::uint32_t a = h_output(2 * n);
        const std::uint32_t b = std::rotl(h_output(2 * n + 1), 8);
        out[2 * n] = a + b;
        out[2 * n + 1] = std::rotl(a + 2 * b, 9);
    }
    return out;
}

void dump_tables(std::ostream &out) {
    auto dump = [&out](const char *name, const Permutation &q) {
        out << name << ":\n";
        std::ostringstream line;
        for (int x = 0; x < 256; ++x) {
            line << std::hex << std::setw(2) << std::setfill('0') << int{q[x]};
            line << ((x % 16 == 15) ? '\n' : ' ');
        }
        out << line.str();
    };
    dump("q0", q0());
    dump("q1", q1());
    out << "P (rows j=0..3, columns k=0..4, k=0 is the final substitution):\n";
    for (int j = 0; j < kRows; ++j) {
        for (int k = 0; k < kStages; ++k)
            out << (k ? " " : "") << int{detail::kSelector[j][k]};
        out << '\n';
    }
}

} // namespace tfspa
