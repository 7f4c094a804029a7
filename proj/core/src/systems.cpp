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
#include <cmath>
#include <cstdlib>
#include <string>

#include "tfspa/attack.hpp"

namespace tfspa {

std::string_view to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

std::string_view to_string(SolverTier t) noexcept {
    switch (t) {
    case SolverTier::exact:
        return "exact";
    case SolverTier::lms:
        return "lms";
    case SolverTier::lms_mask:
        return "lms+mask";
    }
    return "?";
}

int round_measurement(double x) noexcept {
    if (!(x > 0.0))
        return 0;
    if (x >= 8.0)
        return 8;
    return static_cast<int>(std::lround(x));
}

MeasuredSystem build_system(const HammingTrace &trace, const KnownBytes &known_w, int j, int k,
                            Parity parity) {
    if (j < 0 || j >= kRows)
        throw std::invalid_argument("row index j out of range 0..3: " + std::to_string(j));
    if (k < 1 || k > trace.rounds())
        throw std::invalid_argument("round index k out of range 1..R: " + std::to_string(k));

    MeasuredSystem s;
    s.row = j;
    s.round = k;
    s.parity = parity;
    s.known_w = known_w;
    for (int r = 0; r < kEquations; ++r) {
        for (int n = 0; n < 8; ++n) {
            s.d[r][n] = static_cast<std::uint8_t>((known_w[r] >> n) & 1);
            s.a[r][n] = static_cast<std::int8_t>(1 - 2 * s.d[r][n]);
        }
        s.rhs_raw[r] = trace.hv(s.subkey(r), j, k - 1);
        s.rhs[r] = round_measurement(s.rhs_raw[r]);
    }
    return s;
}

ByteGuess break_key_byte_exact(const MeasuredSystem &system) {
    for (int m = 0; m < 256; ++m) {
        bool valid = true;
        for (int r = 0; r < kEquations; ++r) {
            if (hamming(static_cast<std::uint8_t>(system.known_w[r] ^ m)) != system.rhs[r]) {
                valid = false;
                break;
            }
        }
        if (valid)
            return {static_cast<std::uint8_t>(m), true};
    }
    return {0, false};
}

namespace {

using Matrix8 = std::array<std::array<double, 8>, 8>;
__extension__ using Wide = __int128;

// Bareiss fraction-free elimination; the Gram matrix of a +-1 system is
// integral, so singularity is decided exactly.
bool singular_gram(const std::array<std::array<long long, 8>, 8> &gram) {
    std::array<std::array<Wide, 8>, 8> m{};
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            m[r][c] = gram[r][c];
    Wide prev = 1;
    for (int p = 0; p < 8; ++p) {
        if (m[p][p] == 0) {
            int swap = -1;
            for (int r = p + 1; r < 8; ++r)
                if (m[r][p] != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0)
                return true;
            std::swap(m[p], m[swap]);
        }
        for (int r = p + 1; r < 8; ++r) {
            for (int c = p + 1; c < 8; ++c)
                m[r][c] = (m[r][c] * m[p][p] - m[r][p] * m[p][c]) / prev;
            m[r][p] = 0;
        }
        prev = m[p][p];
    }
    return false;
}

// Gaussian elimination with partial pivoting on a small dense system.
std::array<double, 8> solve8(Matrix8 m, std::array<double, 8> b) {
    for (int p = 0; p < 8; ++p) {
        int best = p;
        for (int r = p + 1; r < 8; ++r)
            if (std::abs(m[r][p]) > std::abs(m[best][p]))
                best = r;
        std::swap(m[p], m[best]);
        std::swap(b[p], b[best]);
        for (int r = p + 1; r < 8; ++r) {
            const double f = m[r][p] / m[p][p];
            for (int c = p; c < 8; ++c)
                m[r][c] -= f * m[p][c];
            b[r] -= f * b[p];
        }
    }
    std::array<double, 8> x{};
    for (int p = 7; p >= 0; --p) {
        double acc = b[p];
        for (int c = p + 1; c < 8; ++c)
            acc -= m[p][c] * x[c];
        x[p] = acc / m[p][p];
    }
    return x;
}

} // namespace

LmsEstimate lms_estimate(const MeasuredSystem &system) {
    std::array<std::array<long long, 8>, 8> gram{};
    std::array<double, 8> atb{};
    for (int r = 0; r < kEquations; ++r) {
        const double target = system.rhs[r] - hamming(system.known_w[r]);
        for (int p = 0; p < 8; ++p) {
            atb[p] += system.a[r][p] * target;
            for (int q = 0; q < 8; ++q)
                gram[p][q] += system.a[r][p] * system.a[r][q];
        }
    }

    LmsEstimate est;
    est.rank_deficient = singular_gram(gram);
    Matrix8 normal{};
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q)
            normal[p][q] = static_cast<double>(gram[p][q]);
    if (est.rank_deficient)
        for (int p = 0; p < 8; ++p)
            normal[p][p] += kRidgeLambda;

    est.solution = solve8(normal, atb);
    double dist2 = 0.0;
    unsigned byte = 0;
    for (int n = 0; n < 8; ++n) {
        const double x = est.solution[n];
        const double bit = std::clamp(std::round(x), 0.0, 1.0);
        dist2 += (x - bit) * (x - bit);
        if (bit == 1.0)
            byte |= 1u << n;
    }
    est.byte = static_cast<std::uint8_t>(byte);
    est.rounding_distance = std::sqrt(dist2);
    return est;
}

} // namespace tfspa
