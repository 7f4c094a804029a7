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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   tfspa_acceptance            full profile (1000 runs per accuracy cell, +-5 pp)
//   tfspa_acceptance --quick    200 runs per cell, +-8 pp

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tfspa/attack.hpp"
#include "tfspa/bench.hpp"
#include "tfspa/schedule.hpp"
#include "tfspa/tracesim.hpp"

using namespace tfspa;

namespace {

struct SubkeyVector {
    const char *cipher_key_hex;
    std::array<std::uint32_t, 40> words;
};

const SubkeyVector kSubkeyVectors[] = {
#include "subkey_vectors.inc"
};

struct Profile {
    int runs = 1000;
    double tolerance_pp = 5.0;
};

constexpr std::uint64_t kBenchSeed = 7;
constexpr int kTrendRuns = 500;
constexpr double kMaxMeanReadings = 2.5;
constexpr double kMaxAttackSeconds = 1.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SecretKey random_key(std::mt19937_64 &rng, int bits) {
    return SecretKey(oracle::random_bytes(rng, static_cast<std::size_t>(bits / 8)));
}

MeasuredSystem system_from(const KnownBytes &w, const std::array<int, kEquations> &rhs) {
    HammingTrace t(128);
    for (int r = 0; r < kEquations; ++r)
        t.hv(2 * r, 0, 0) = rhs[r];
    return build_system(t, w, 0, 1, Parity::even);
}

KnownBytes random_known(std::mt19937_64 &rng) {
    KnownBytes w{};
    for (auto &b : w)
        b = static_cast<std::uint8_t>(rng() & 0xFF);
    return w;
}

std::array<int, kEquations> exact_rhs(const KnownBytes &w, std::uint8_t m) {
    std::array<int, kEquations> rhs{};
    for (int r = 0; r < kEquations; ++r)
        rhs[r] = std::popcount(static_cast<unsigned>(w[r] ^ m));
    return rhs;
}

BenchResult grid(const std::vector<double> &sigmas, const std::vector<int> &taus, int key_size,
                 int runs, bool multi) {
    BenchConfig c;
    c.sigmas = sigmas;
    c.taus = taus;
    c.key_sizes = {key_size};
    c.runs = runs;
    c.base_seed = kBenchSeed;
    c.multi = multi;
    return run_grid(c);
}

struct Target {
    double sigma;
    int tau;
    double percent;
};

Outcome check_targets(const std::vector<Target> &targets, const Profile &p, bool multi) {
    Outcome o{true, ""};
    for (const Target &t : targets) {
        const BenchCell c = grid({t.sigma}, {t.tau}, 128, p.runs, multi).cells.front();
        const double got = 100.0 * c.accuracy;
        const bool ok = std::abs(got - t.percent) <= p.tolerance_pp;
        o.pass = o.pass && ok;
        o.detail += fmt("(%.1f,%d) %.1f%% vs %.1f%%%s; ", t.sigma, t.tau, got, t.percent, ok ? "" : " !");
    }
    return o;
}

Outcome ac1_error_free(const Profile &) {
    std::mt19937_64 rng(1001);
    int failures = 0, total = 0;
    for (int bits : {128, 192, 256})
        for (int n = 0; n < 1000; ++n) {
            const SecretKey key = random_key(rng, bits);
            ++total;
            try {
                failures += attack_exact(simulate_trace(key, {0.0, 0})).key_estimate != key;
            } catch (const ExactAttackFailure &) {
                ++failures;
            }
        }
    return {failures == 0, fmt("%d/%d keys recovered", total - failures, total)};
}

Outcome ac2_noisy_grid(const Profile &p) {
    return check_targets({{0.4, 0, 97.5}, {0.6, 0, 63.2}, {0.8, 1, 77.3}, {1.0, 3, 97.3}, {1.4, 3, 52.6},
                          {2.0, 3, 0.5}},
                         p, false);
}

Outcome ac3_multi_reading(const Profile &p) {
    Outcome o = check_targets({{1.0, 1, 98.3}, {1.4, 3, 99.3}, {1.6, 3, 93.0}}, p, true);
    const BenchResult r = grid({0.2, 0.4, 0.6, 0.8, 1.0}, {3}, 128, p.runs, true);
    double worst = 0.0;
    for (const BenchCell &c : r.cells)
        worst = std::max(worst, c.readings_used);
    const bool ok = worst <= kMaxMeanReadings;
    o.pass = o.pass && ok;
    o.detail += fmt("max mean readings (sigma<=1.0, tau=3) %.3f%s", worst, ok ? "" : " !");
    return o;
}

Outcome ac4_key_size_trend(const Profile &) {
    double acc[3];
    const int sizes[3] = {128, 192, 256};
    for (int s = 0; s < 3; ++s)
        acc[s] = 100.0 * grid({1.2}, {3}, sizes[s], kTrendRuns, false).cells.front().accuracy;
    return {acc[0] >= acc[1] && acc[1] >= acc[2],
            fmt("128: %.1f%%, 192: %.1f%%, 256: %.1f%%", acc[0], acc[1], acc[2])};
}

Outcome ac5_mask_cardinality(const Profile &) {
    const std::size_t expected[] = {1, 9, 37, 93, 163, 219, 247, 255, 256};
    std::string got;
    bool ok = true;
    for (int tau = 0; tau <= 8; ++tau) {
        const std::size_t n = mask_candidates(0xA5, tau).size();
        ok = ok && n == expected[tau] && mask_prefix_size(tau) == expected[tau];
        got += std::to_string(n) + (tau < 8 ? "," : "");
    }
    return {ok, got};
}

Outcome ac6_oracles(const Profile &) {
    std::mt19937_64 rng(1006);
    int bad_exact = 0;
    for (int n = 0; n < 10000; ++n) {
        const KnownBytes w = random_known(rng);
        auto rhs = exact_rhs(w, static_cast<std::uint8_t>(rng()));
        if (n % 2)
            for (int e = 0; e < 1 + n % 3; ++e) {
                int &v = rhs[rng() % kEquations];
                v = std::clamp(v + static_cast<int>(rng() % 9) - 4, 0, 8);
            }
        const ByteGuess g = break_key_byte_exact(system_from(w, rhs));
        const auto all = oracle::all_consistent_bytes(w, rhs);
        bad_exact += g.found != !all.empty() || (g.found && g.byte != all.front());
    }

    static constexpr int kP[4][5] = {{0, 1, 1, 0, 1}, {1, 1, 0, 0, 0}, {0, 0, 1, 1, 0}, {1, 0, 0, 1, 1}};
    int bad_mask = 0;
    for (int n = 0; n < 1000; ++n) {
        const SecretKey key = random_key(rng, 128 + 64 * (n % 3));
        const auto s = compute_intermediates(key);
        const HammingTrace t = simulate_trace(key, {0.8 + 0.1 * (n % 10), rng()});
        const int j = static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(key.rounds()));
        const Parity par = (n % 2) ? Parity::odd : Parity::even;
        KnownBytes known{};
        std::vector<double> mv, mw;
        for (int r = 0; r < kEquations; ++r) {
            const int i = 2 * r + static_cast<int>(par);
            known[r] = s.w(i, j, k);
            mv.push_back(t.hv(i, j, k - 1));
            mw.push_back(t.hw(i, j, k - 1));
        }
        const MeasuredSystem sys = build_system(t, known, j, k, par);
        const auto start = static_cast<std::uint8_t>(rng());
        const oracle::Box &next = kP[j][k - 1] ? oracle::Q1() : oracle::Q0();
        int best = 1 << 30;
        for (int m = 0; m < 256; ++m)
            best = std::min(best, oracle::combined_residual(known, mv, mw, next, m));
        const MaskCorrection c = mask_correct(start, sys, t, 8);
        bad_mask += c.objective != best || oracle::combined_residual(known, mv, mw, next, c.byte) != best;
    }

    int bad_lms = 0;
    for (int n = 0; n < 1000; ++n) {
        const KnownBytes w = random_known(rng);
        auto rhs = exact_rhs(w, static_cast<std::uint8_t>(rng()));
        std::vector<int> rows(kEquations);
        std::iota(rows.begin(), rows.end(), 0);
        std::shuffle(rows.begin(), rows.end(), rng);
        for (int p = 0; p < 3; ++p) {
            int &v = rhs[rows[p]];
            v = (v == 0) ? 1 : (v == 8) ? 7 : v + ((rng() & 1) ? 1 : -1);
        }
        bad_lms += lms_estimate(system_from(w, rhs)).byte != oracle::quadratic_loss_minimiser(w, rhs);
    }
    return {bad_exact == 0 && bad_mask == 0 && bad_lms == 0,
            fmt("(a) %d/10000 (b) %d/1000 (c) %d/1000 disagreements", bad_exact, bad_mask, bad_lms)};
}

Outcome ac7_schedule(const Profile &) {
    int bad_kat = 0, kats = 0;
    for (const SubkeyVector &v : kSubkeyVectors) {
        std::vector<std::uint8_t> bytes;
        for (const char *c = v.cipher_key_hex; *c; c += 2)
            bytes.push_back(static_cast<std::uint8_t>(std::stoi(std::string(c, 2), nullptr, 16)));
        ++kats;
        bad_kat += derive_subkeys(SecretKey::from_cipher_bytes(bytes)) != v.words;
    }
    std::mt19937_64 rng(1007);
    int bad_chain = 0;
    for (int n = 0; n < 1000; ++n) {
        const SecretKey key = random_key(rng, 128 + 64 * (n % 3));
        const int R = key.rounds();
        const auto s = compute_intermediates(key);
        bool ok = true;
        for (int i = 0; i < 40; ++i)
            for (int j = 0; j < 4; ++j) {
                ok = ok && s.v(i, j, R) == i;
                for (int k = 1; k <= R; ++k)
                    ok = ok && (s.v(i, j, k - 1) ^ s.w(i, j, k)) == key[8 * (k - 1) + j + 4 * (i % 2)];
            }
        bad_chain += !ok;
    }
    return {bad_kat == 0 && bad_chain == 0 && kats == 31,
            fmt("subkey KATs %d/%d, chain consistency %d/1000", kats - bad_kat, kats, 1000 - bad_chain)};
}

std::string bench_fingerprint(BenchResult r) {
    for (BenchCell &c : r.cells)
        c.mean_runtime_s = 0.0;
    std::ostringstream out;
    emit_report(r, ReportFormat::csv, out);
    return out.str();
}

Outcome ac8_determinism(const Profile &) {
    BenchConfig c;
    c.sigmas = {0.6, 1.2};
    c.taus = {0, 3};
    c.key_sizes = {128, 256};
    c.runs = 50;
    c.base_seed = 99;
    const bool same_bench = bench_fingerprint(run_grid(c, 1)) == bench_fingerprint(run_grid(c, 2));
    c.multi = true;
    const bool same_multi = bench_fingerprint(run_grid(c, 1)) == bench_fingerprint(run_grid(c, 1));

    std::mt19937_64 rng(1008);
    int exact = 0;
    for (int n = 0; n < 100; ++n) {
        const SecretKey key = random_key(rng, 128 + 64 * (n % 3));
        const HammingTrace t = simulate_trace(key, {0.05 * n, rng()});
        std::stringstream io;
        write_trace(t, io);
        exact += read_trace(io) == t;
    }
    return {same_bench && same_multi && exact == 100,
            fmt("bench repeat %s, multi repeat %s, trace round trips %d/100", same_bench ? "identical" : "DIFFER",
                same_multi ? "identical" : "DIFFER", exact)};
}

Outcome ac9_runtime(const Profile &) {
    std::mt19937_64 rng(1009);
    double worst = 0.0;
    for (double sigma : {0.0, 0.5, 1.0, 1.5, 2.0})
        for (int tau = 0; tau <= 3; ++tau)
            for (int n = 0; n < 5; ++n) {
                const HammingTrace t = simulate_trace(random_key(rng, 256), {sigma, rng()});
                const auto start = std::chrono::steady_clock::now();
                (void)attack_noisy(t, tau);
                worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            }
    return {worst < kMaxAttackSeconds, fmt("slowest 256-bit attack %.3f ms", 1e3 * worst)};
}

} // namespace

int main(int argc, char **argv) {
    Profile profile;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--quick") == 0) {
            profile = {200, 8.0};
        } else {
            std::fprintf(stderr, "usage: %s [--quick]\n", argv[0]);
            return 2;
        }
    }
    std::printf("profile: runs=%d tolerance=+-%.0f pp seed=%llu\n", profile.runs, profile.tolerance_pp,
                static_cast<unsigned long long>(kBenchSeed));

    const std::pair<const char *, std::function<Outcome(const Profile &)>> criteria[] = {
        {"AC1 error-free recovery", ac1_error_free},
        {"AC2 noisy grid spot checks", ac2_noisy_grid},
        {"AC3 multi-reading spot checks", ac3_multi_reading},
        {"AC4 key-size trend", ac4_key_size_trend},
        {"AC5 mask-set cardinalities", ac5_mask_cardinality},
        {"AC6 oracle equivalences", ac6_oracles},
        {"AC7 schedule correctness", ac7_schedule},
        {"AC8 determinism and format", ac8_determinism},
        {"AC9 runtime bound", ac9_runtime},
    };
    int failed = 0;
    for (const auto &[name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome o = run(profile);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed ? 1 : 0;
}
