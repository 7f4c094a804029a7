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

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's solvers or the S-box selector
// matrix; each routine is a direct transcription written for checking.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace oracle {

using Box = std::array<std::uint8_t, 256>;

// q0 / q1 rebuilt from their 4-bit lookup tables.
inline Box q_from_nibbles(int which) {
    static constexpr std::uint8_t kT[2][4][16] = {
        {{0x8, 0x1, 0x7, 0xD, 0x6, 0xF, 0x3, 0x2, 0x0, 0xB, 0x5, 0x9, 0xE, 0xC, 0xA, 0x4},
         {0xE, 0xC, 0xB, 0x8, 0x1, 0x2, 0x3, 0x5, 0xF, 0x4, 0xA, 0x6, 0x7, 0x0, 0x9, 0xD},
         {0xB, 0xA, 0x5, 0xE, 0x6, 0xD, 0x9, 0x0, 0xC, 0x8, 0xF, 0x3, 0x2, 0x4, 0x7, 0x1},
         {0xD, 0x7, 0xF, 0x4, 0x1, 0x2, 0x6, 0xE, 0x9, 0xB, 0x3, 0x0, 0x8, 0x5, 0xC, 0xA}},
        {{0x2, 0x8, 0xB, 0xD, 0xF, 0x7, 0x6, 0xE, 0x3, 0x1, 0x9, 0x4, 0x0, 0xA, 0xC, 0x5},
         {0x1, 0xE, 0x2, 0xB, 0x4, 0xC, 0x3, 0x7, 0x6, 0xD, 0xA, 0x5, 0xF, 0x9, 0x0, 0x8},
         {0x4, 0xC, 0x7, 0x5, 0x1, 0x6, 0x9, 0xA, 0x0, 0xE, 0xD, 0x8, 0x2, 0xB, 0x3, 0xF},
         {0xB, 0x9, 0x5, 0x1, 0xC, 0x3, 0xD, 0xE, 0x6, 0x4, 0x7, 0xF, 0x2, 0x0, 0x8, 0xA}}};
    auto ror4 = [](unsigned x) { return ((x >> 1) | (x << 3)) & 0xF; };
    Box q{};
    for (unsigned x = 0; x < 256; ++x) {
        const unsigned a0 = x >> 4, b0 = x & 0xF;
        const unsigned a1 = a0 ^ b0, b1 = (a0 ^ ror4(b0) ^ (8 * a0)) & 0xF;
        const unsigned a2 = kT[which][0][a1], b2 = kT[which][1][b1];
        const unsigned a3 = a2 ^ b2, b3 = (a2 ^ ror4(b2) ^ (8 * a2)) & 0xF;
        const unsigned a4 = kT[which][2][a3], b4 = kT[which][3][b3];
        q[x] = static_cast<std::uint8_t>((b4 << 4) | a4);
    }
    return q;
}

inline const Box &Q0() {
    static const Box q = q_from_nibbles(0);
    return q;
}
inline const Box &Q1() {
    static const Box q = q_from_nibbles(1);
    return q;
}

// The 128-bit h dataflow written out row by row: per row, the boxes at k = 2, 1, 0
// and the key bytes XORed in after k = 2 and k = 1 (even subkeys; odd
// subkeys use the bytes four places higher).
struct UnrolledRow {
    const Box *box[3];
    int byte_k2;
    int byte_k1;
};

struct Intermediates128 {
    std::uint8_t v[40][4][3];
    std::uint8_t w[40][4][3];
};

inline Intermediates128 unrolled_intermediates_128(std::span<const std::uint8_t, 16> m) {
    const UnrolledRow rows[4] = {
        {{&Q1(), &Q1(), &Q0()}, 8, 0},
        {{&Q0(), &Q1(), &Q1()}, 9, 1},
        {{&Q1(), &Q0(), &Q0()}, 10, 2},
        {{&Q0(), &Q0(), &Q1()}, 11, 3},
    };
    Intermediates128 out{};
    for (int i = 0; i < 40; ++i) {
        const int shift = (i % 2) * 4;
        for (int j = 0; j < 4; ++j) {
            const UnrolledRow &row = rows[j];
            out.v[i][j][2] = static_cast<std::uint8_t>(i);
            out.w[i][j][2] = (*row.box[0])[out.v[i][j][2]];
            out.v[i][j][1] = out.w[i][j][2] ^ m[row.byte_k2 + shift];
            out.w[i][j][1] = (*row.box[1])[out.v[i][j][1]];
            out.v[i][j][0] = out.w[i][j][1] ^ m[row.byte_k1 + shift];
            out.w[i][j][0] = (*row.box[2])[out.v[i][j][0]];
        }
    }
    return out;
}

// Word-oriented h function up to (not including) the MDS step, in the
// cipher's byte order. words holds L_0 .. L_{R-1} as little-endian bytes.
inline std::array<std::uint8_t, 4> cipher_h_bytes(std::uint8_t input,
                                                  const std::vector<std::array<std::uint8_t, 4>> &words) {
    const std::size_t k = words.size();
    std::array<std::uint8_t, 4> y = {input, input, input, input};
    const Box &q0 = Q0();
    const Box &q1 = Q1();
    if (k == 4) {
        y = {static_cast<std::uint8_t>(q1[y[0]] ^ words[3][0]), static_cast<std::uint8_t>(q0[y[1]] ^ words[3][1]),
             static_cast<std::uint8_t>(q0[y[2]] ^ words[3][2]), static_cast<std::uint8_t>(q1[y[3]] ^ words[3][3])};
    }
    if (k >= 3) {
        y = {static_cast<std::uint8_t>(q1[y[0]] ^ words[2][0]), static_cast<std::uint8_t>(q1[y[1]] ^ words[2][1]),
             static_cast<std::uint8_t>(q0[y[2]] ^ words[2][2]), static_cast<std::uint8_t>(q0[y[3]] ^ words[2][3])};
    }
    return {q1[q0[q0[y[0]] ^ words[1][0]] ^ words[0][0]], q0[q0[q1[y[1]] ^ words[1][1]] ^ words[0][1]],
            q1[q1[q0[y[2]] ^ words[1][2]] ^ words[0][2]], q0[q1[q1[y[3]] ^ words[1][3]] ^ words[0][3]]};
}

// Every m in 0..255 satisfying H(w_r ^ m) == rhs_r on all rows, no early exit.
inline std::vector<int> all_consistent_bytes(std::span<const std::uint8_t> w, std::span<const int> rhs) {
    std::vector<int> out;
    for (int m = 0; m < 256; ++m) {
        int mismatches = 0;
        for (std::size_t r = 0; r < w.size(); ++r)
            mismatches += std::popcount(static_cast<unsigned>(w[r] ^ m)) != rhs[r];
        if (mismatches == 0)
            out.push_back(m);
    }
    return out;
}

// Binary minimiser of sum_r (b_r - sum_n a_rn x_n)^2 with a = 1 - 2 bit(w_r, n)
// and b_r = rhs_r - H(w_r); ties go to the smaller byte.
inline int quadratic_loss_minimiser(std::span<const std::uint8_t> w, std::span<const int> rhs) {
    int best = 0;
    long long best_loss = std::numeric_limits<long long>::max();
    for (int x = 0; x < 256; ++x) {
        long long loss = 0;
        for (std::size_t r = 0; r < w.size(); ++r) {
            long long pred = 0;
            for (int n = 0; n < 8; ++n) {
                const int sign = ((w[r] >> n) & 1) ? -1 : 1;
                pred += sign * ((x >> n) & 1);
            }
            const long long b = rhs[r] - std::popcount(static_cast<unsigned>(w[r]));
            loss += (b - pred) * (b - pred);
        }
        if (loss < best_loss) {
            best_loss = loss;
            best = x;
        }
    }
    return best;
}

inline int nearest_clamped(double x) {
    const double r = std::round(x);
    return static_cast<int>(r < 0 ? 0 : (r > 8 ? 8 : r));
}

// Combined input/output Hamming residual of candidate byte m.
inline int combined_residual(std::span<const std::uint8_t> w, std::span<const double> measured_v,
                             std::span<const double> measured_w_next, const Box &next_box, int m) {
    int total = 0;
    for (std::size_t r = 0; r < w.size(); ++r) {
        const auto v = static_cast<std::uint8_t>(w[r] ^ m);
        total += std::abs(std::popcount(static_cast<unsigned>(v)) - nearest_clamped(measured_v[r]));
        total += std::abs(std::popcount(static_cast<unsigned>(next_box[v])) -
                          nearest_clamped(measured_w_next[r]));
    }
    return total;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64 &rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto &b : out)
        b = static_cast<std::uint8_t>(rng() & 0xFF);
    return out;
}

} // namespace oracle
