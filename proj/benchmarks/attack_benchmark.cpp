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

#include <array>
#include <cstdint>

#include <benchmark/benchmark.h>

#include "tfspa/attack.hpp"
#include "tfspa/schedule.hpp"
#include "tfspa/tracesim.hpp"

namespace {

tfspa::SecretKey bench_key(int bits) {
    std::array<std::uint8_t, 32> bytes{};
    for (std::size_t l = 0; l < bytes.size(); ++l)
        bytes[l] = static_cast<std::uint8_t>(0x9E * l + 0x37);
    return tfspa::SecretKey(std::span<const std::uint8_t>(bytes.data(), static_cast<std::size_t>(bits / 8)));
}

void BM_SimulateTrace(benchmark::State &state) {
    const auto key = bench_key(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(tfspa::simulate_trace(key, {1.0, seed++}));
}
BENCHMARK(BM_SimulateTrace)->Arg(128)->Arg(256);

void BM_AttackExact(benchmark::State &state) {
    const auto trace = tfspa::simulate_trace(bench_key(static_cast<int>(state.range(0))), {0.0, 0});
    for (auto _ : state)
        benchmark::DoNotOptimize(tfspa::attack_exact(trace));
}
BENCHMARK(BM_AttackExact)->Arg(128)->Arg(192)->Arg(256);

// args: key bits, tau
void BM_AttackNoisy(benchmark::State &state) {
    const auto trace = tfspa::simulate_trace(bench_key(static_cast<int>(state.range(0))), {1.0, 3});
    const int tau = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(tfspa::attack_noisy(trace, tau));
}
BENCHMARK(BM_AttackNoisy)->ArgsProduct({{128, 256}, {0, 1, 3, 8}});

void BM_AttackMulti(benchmark::State &state) {
    const auto readings = tfspa::multi_trace(bench_key(128), 1.4, 5, 21);
    for (auto _ : state)
        benchmark::DoNotOptimize(tfspa::attack_multi(readings, 3));
}
BENCHMARK(BM_AttackMulti);

} // namespace

BENCHMARK_MAIN();
