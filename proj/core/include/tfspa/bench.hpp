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
#include <string_view>
#include <vector>

namespace tfspa {

/// A (sigma, tau, key size) Monte Carlo grid.
struct BenchConfig {
    std::vector<double> sigmas{0.0};
    std::vector<int> taus{0};
    std::vector<int> key_sizes{128};
    int runs = 200;
    std::uint64_t base_seed = 0;
    /// Use attack_multi over up to max_readings readings per key.
    bool multi = false;
    int max_readings = 5;

    /// Throws std::invalid_argument on an empty grid, runs < 1, a negative
    /// sigma, tau outside 0..8 or an unsupported key size.
    void validate() const;
};

struct BenchCell {
    int key_size = 128;
    double sigma = 0.0;
    int tau = 0;
    int runs = 0;
    int successes = 0;
    /// Fraction of runs whose full key estimate was exact.
    double accuracy = 0.0;
    /// Mean wall time of one attack call (trace generation excluded).
    double mean_runtime_s = 0.0;
    /// Mean readings consumed per key; 1 outside multi mode.
    double readings_used = 1.0;
};

/// Cells ordered by key size, then sigma, then tau, each as given in the config.
struct BenchResult {
    std::vector<BenchCell> cells;
};

/// Seed for one run of one cell; mixes every coordinate so cells can be re-run alone.
std::uint64_t cell_seed(std::uint64_t base_seed, int key_size, double sigma, int tau,
                        std::uint64_t run) noexcept;

/// Runs one cell of the grid.
BenchCell run_cell(const BenchConfig &config, int key_size, double sigma, int tau);

/// Runs every cell; threads = 0 uses the hardware concurrency.
BenchResult run_grid(const BenchConfig &config, unsigned threads = 0);

enum class ReportFormat { csv, markdown };

void emit_report(const BenchResult &result, ReportFormat format, std::ostream &out);
/// Throws std::runtime_error when the destination cannot be written.
void emit_report(const BenchResult &result, ReportFormat format,
                 const std::filesystem::path &destination);

/// "start:stop:step" (inclusive) or a comma list of reals.
std::vector<double> parse_real_range(std::string_view text);
/// "a..b" (inclusive) or a comma list of integers.
std::vector<int> parse_int_range(std::string_view text);

} // namespace tfspa
