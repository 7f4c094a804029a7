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

// tfspa: simulate key-schedule Hamming traces, attack them, and sweep accuracy grids.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "tfspa/attack.hpp"
#include "tfspa/bench.hpp"
#include "tfspa/schedule.hpp"
#include "tfspa/tracesim.hpp"

namespace {

constexpr int kExitTraceFormat = 2;

struct TraceArgs {
    std::string key_hex;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct AttackArgs {
    std::string trace;
    int tau = 3;
    std::vector<std::string> multi;
    int max_readings = 5;
    bool exact = false;
    std::string report;
};

struct BenchArgs {
    std::string sigmas = "0:2:0.2";
    std::string taus = "0..8";
    std::string key_sizes = "128";
    int runs = 200;
    bool full = false;
    std::uint64_t seed = 0;
    bool multi = false;
    int max_readings = 5;
    unsigned threads = 0;
    std::string out;
    std::string markdown;
};

int run_trace(const TraceArgs &args) {
    const tfspa::SecretKey key = tfspa::SecretKey::from_hex(args.key_hex);
    const tfspa::HammingTrace trace = tfspa::simulate_trace(key, {args.sigma, args.seed});
    tfspa::write_trace(trace, args.out);
    return 0;
}

int run_attack(const AttackArgs &args) {
    std::vector<tfspa::HammingTrace> readings;
    try {
        readings.push_back(tfspa::read_trace(args.trace));
        for (const std::string &path : args.multi)
            readings.push_back(tfspa::read_trace(path));
    } catch (const tfspa::TraceFormatError &e) {
        std::cerr << "trace format error: " << e.what() << '\n';
        return kExitTraceFormat;
    }

    tfspa::AttackReport report;
    if (args.exact)
        report = tfspa::attack_exact(readings.front());
    else if (readings.size() > 1)
        report = tfspa::attack_multi(readings, args.tau, args.max_readings);
    else
        report = tfspa::attack_noisy(readings.front(), args.tau);

    if (args.report.empty()) {
        tfspa::write_attack_report(report, std::cout);
    } else {
        std::ofstream out(args.report);
        if (!out)
            throw std::runtime_error("cannot open report for writing: " + args.report);
        tfspa::write_attack_report(report, out);
    }
    return 0;
}

int run_bench(const BenchArgs &args) {
    tfspa::BenchConfig config;
    config.sigmas = tfspa::parse_real_range(args.sigmas);
    config.taus = tfspa::parse_int_range(args.taus);
    config.key_sizes = tfspa::parse_int_range(args.key_sizes);
    config.runs = args.full ? 1000 : args.runs;
    config.base_seed = args.seed;
    config.multi = args.multi;
    config.max_readings = args.max_readings;
    config.validate();

    const tfspa::BenchResult result = tfspa::run_grid(config, args.threads);
    tfspa::emit_report(result, tfspa::ReportFormat::csv, std::filesystem::path(args.out));
    if (!args.markdown.empty())
        tfspa::emit_report(result, tfspa::ReportFormat::markdown,
                           std::filesystem::path(args.markdown));
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simple power analysis workbench for the Twofish key schedule"};
    bool dump = false;
    app.add_flag("--dump-tables", dump, "Print q0, q1 and the S-box selector matrix");

    TraceArgs trace_args;
    auto *trace_cmd = app.add_subcommand("trace", "Simulate a noisy Hamming trace for a key");
    trace_cmd->add_option("--key-hex", trace_args.key_hex, "Key bytes m_0.. in hex (128/192/256 bits)")
        ->required();
    trace_cmd->add_option("--sigma", trace_args.sigma, "Gaussian noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    trace_cmd->add_option("--seed", trace_args.seed, "Noise seed");
    trace_cmd->add_option("--out", trace_args.out, "Output trace file")->required();

    AttackArgs attack_args;
    auto *attack_cmd = app.add_subcommand("attack", "Recover the key from one or more traces");
    attack_cmd->add_option("--trace", attack_args.trace, "Trace file")->required();
    attack_cmd->add_option("--tau", attack_args.tau, "Mask weight threshold")
        ->check(CLI::Range(0, 8));
    attack_cmd->add_option("--multi", attack_args.multi, "Further readings of the same key");
    attack_cmd->add_option("--max-readings", attack_args.max_readings, "Reading limit for voting")
        ->check(CLI::PositiveNumber);
    attack_cmd->add_flag("--exact", attack_args.exact, "Error-free exhaustive search only");
    attack_cmd->add_option("--report", attack_args.report, "Write the report here instead of stdout");

    BenchArgs bench_args;
    auto *bench_cmd = app.add_subcommand("bench", "Monte Carlo accuracy and runtime sweep");
    bench_cmd->add_option("--sigmas", bench_args.sigmas, "start:stop:step or comma list");
    bench_cmd->add_option("--taus", bench_args.taus, "a..b or comma list");
    bench_cmd->add_option("--key-sizes", bench_args.key_sizes, "Comma list of 128, 192, 256");
    bench_cmd->add_option("--runs", bench_args.runs, "Random keys per cell");
    bench_cmd->add_flag("--full", bench_args.full, "Use 1000 runs per cell");
    bench_cmd->add_option("--seed", bench_args.seed, "Base seed");
    bench_cmd->add_flag("--multi", bench_args.multi, "Vote over multiple readings per key");
    bench_cmd->add_option("--max-readings", bench_args.max_readings, "Reading limit in --multi mode");
    bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (0 = all cores)");
    bench_cmd->add_option("--out", bench_args.out, "CSV output")->required();
    bench_cmd->add_option("--markdown", bench_args.markdown, "Markdown table output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump) {
            tfspa::dump_tables(std::cout);
            if (app.get_subcommands().empty())
                return 0;
        }
        if (trace_cmd->parsed())
            return run_trace(trace_args);
        if (attack_cmd->parsed())
            return run_attack(attack_args);
        if (bench_cmd->parsed())
            return run_bench(bench_args);
        std::cerr << app.help();
        return 1;
    } catch (const tfspa::TraceFormatError &e) {
        std::cerr << "trace format error: " << e.what() << '\n';
        return kExitTraceFormat;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
