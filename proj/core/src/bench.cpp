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

#include "tfspa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "tfspa/attack.hpp"
#include "tfspa/tracesim.hpp"

namespace tfspa {

void BenchConfig::validate() const {
    if (sigmas.empty() || taus.empty() || key_sizes.empty())
        throw std::invalid_argument("bench grid must have at least one sigma, tau and key size");
    if (runs < 1)
        throw std::invalid_argument("runs must be at least 1");
    if (multi && max_readings < 1)
        throw std::invalid_argument("max_readings must be at least 1");
    for (double s : sigmas)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("sigma values must be finite and non-negative");
    for (int t : taus)
        if (t < 0 || t > kMaxTau)
            throw std::invalid_argument("tau values must lie in 0..8");
    for (int k : key_sizes)
        rounds_for_key_bits(k);
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t cell_seed(std::uint64_t base_seed, int key_size, double sigma, int tau,
                        std::uint64_t run) noexcept {
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(key_size));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(sigma));
    h = splitmix64(h ^ static_cast<std::uint64_t>(tau));
    return splitmix64(h ^ run);
}

BenchCell run_cell(const BenchConfig &config, int key_size, double sigma, int tau) {
    using Clock = std::chrono::steady_clock;
    BenchCell cell{key_size, sigma, tau, config.runs};
    const std::size_t key_bytes = static_cast<std::size_t>(key_size / 8);
    double total_time = 0.0;
    long long total_readings = 0;

    for (int run = 0; run < config.runs; ++run) {
        std::mt19937_64 rng(cell_seed(config.base_seed, key_size, sigma, tau,
                                      static_cast<std::uint64_t>(run)));
        std::array<std::uint8_t, 32> bytes{};
        for (std::size_t l = 0; l < key_bytes; ++l)
            bytes[l] = static_cast<std::uint8_t>(rng() & 0xFF);
        const SecretKey key(std::span<const std::uint8_t>(bytes.data(), key_bytes));
        const std::uint64_t noise_seed = rng();

        AttackReport report{key, {}};
        if (config.multi) {
            const auto readings = multi_trace(key, sigma, static_cast<std::size_t>(config.max_readings),
                                              noise_seed);
            const auto start = Clock::now();
            report = attack_multi(readings, tau, config.max_readings);
            total_time += std::chrono::duration<double>(Clock::now() - start).count();
        } else {
            const HammingTrace trace = simulate_trace(key, {sigma, noise_seed});
            const auto start = Clock::now();
            report = attack_noisy(trace, tau);
            total_time += std::chrono::duration<double>(Clock::now() - start).count();
        }
        total_readings += report.readings_used;
        if (report.key_estimate == key)
            ++cell.successes;
    }
    cell.accuracy = static_cast<double>(cell.successes) / config.runs;
    cell.mean_runtime_s = total_time / config.runs;
    cell.readings_used = static_cast<double>(total_readings) / config.runs;
    return cell;
}

BenchResult run_grid(const BenchConfig &config, unsigned threads) {
    config.validate();
    BenchResult result;
    for (int key_size : config.key_sizes)
        for (double sigma : config.sigmas)
            for (int tau : config.taus)
                result.cells.push_back({key_size, sigma, tau, config.runs});

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(result.cells.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < result.cells.size(); c = next++) {
            BenchCell &cell = result.cells[c];
            cell = run_cell(config, cell.key_size, cell.sigma, cell.tau);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    return result;
}

namespace {

std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_sigma(double x) {
    std::string s = format_real(x);
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}

std::string format_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

template <typename T> void push_unique(std::vector<T> &v, T x) {
    if (std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
}

void emit_csv(const BenchResult &result, std::ostream &out) {
    out << "key_size,sigma,tau,accuracy,mean_runtime_s,readings_used\n";
    for (const BenchCell &c : result.cells)
        out << c.key_size << ',' << format_real(c.sigma) << ',' << c.tau << ','
            << format_real(c.accuracy) << ',' << format_real(c.mean_runtime_s) << ','
            << format_real(c.readings_used) << '\n';
}

// One sigma x tau accuracy matrix per key size, with mean runtime per tau underneath.
void emit_markdown(const BenchResult &result, std::ostream &out) {
    std::vector<int> sizes;
    for (const BenchCell &c : result.cells)
        push_unique(sizes, c.key_size);

    for (int size : sizes) {
        std::vector<double> sigmas;
        std::vector<int> taus;
        for (const BenchCell &c : result.cells)
            if (c.key_size == size) {
                push_unique(sigmas, c.sigma);
                push_unique(taus, c.tau);
            }
        auto find = [&](double sigma, int tau) -> const BenchCell * {
            for (const BenchCell &c : result.cells)
                if (c.key_size == size && c.sigma == sigma && c.tau == tau)
                    return &c;
            return nullptr;
        };

        out << "### " << size << "-bit key, accuracy (%)\n\n| sigma \\ tau |";
        for (int t : taus)
            out << ' ' << t << " |";
        out << "\n|---|";
        for (std::size_t t = 0; t < taus.size(); ++t)
            out << "---:|";
        out << '\n';
        for (double s : sigmas) {
            out << "| " << format_sigma(s) << " |";
            for (int t : taus) {
                const BenchCell *c = find(s, t);
                out << ' ' << (c ? format_fixed(100.0 * c->accuracy, 1) : std::string("-")) << " |";
            }
            out << '\n';
        }
        out << "| t (ms) |";
        for (int t : taus) {
            double sum = 0.0;
            int n = 0;
            for (double s : sigmas)
                if (const BenchCell *c = find(s, t)) {
                    sum += c->mean_runtime_s;
                    ++n;
                }
            out << ' ' << format_fixed(n ? 1e3 * sum / n : 0.0, 3) << " |";
        }
        out << "\n\n";
    }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(sep, pos);
        parts.push_back(text.substr(pos, end == std::string_view::npos ? end : end - pos));
        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    return parts;
}

template <typename T> T parse_value(std::string_view text) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    return value;
}

} // namespace

void emit_report(const BenchResult &result, ReportFormat format, std::ostream &out) {
    if (format == ReportFormat::csv)
        emit_csv(result, out);
    else
        emit_markdown(result, out);
}

void emit_report(const BenchResult &result, ReportFormat format,
                 const std::filesystem::path &destination) {
    std::ofstream out(destination, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open report for writing: " + destination.string());
    emit_report(result, format, out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing report: " + destination.string());
}

std::vector<double> parse_real_range(std::string_view text) {
    if (text.find(':') == std::string_view::npos) {
        std::vector<double> out;
        for (std::string_view part : split(text, ','))
            out.push_back(parse_value<double>(part));
        return out;
    }
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw std::invalid_argument("range must be start:stop:step");
    const double start = parse_value<double>(parts[0]);
    const double stop = parse_value<double>(parts[1]);
    const double step = parse_value<double>(parts[2]);
    if (!(step > 0.0) || stop < start)
        throw std::invalid_argument("range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    for (long long n = 0; n <= count; ++n) {
        // Snap to 12 decimals so 0:2:0.2 yields 0.6 rather than 0.6000000000000001.
        const double x = start + static_cast<double>(n) * step;
        out.push_back(std::round(x * 1e12) / 1e12);
    }
    return out;
}

std::vector<int> parse_int_range(std::string_view text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string_view::npos) {
        std::vector<int> out;
        for (std::string_view part : split(text, ','))
            out.push_back(parse_value<int>(part));
        return out;
    }
    const int first = parse_value<int>(text.substr(0, dots));
    const int last = parse_value<int>(text.substr(dots + 2));
    if (last < first)
        throw std::invalid_argument("integer range must be ascending");
    std::vector<int> out;
    for (int x = first; x <= last; ++x)
        out.push_back(x);
    return out;
}

} // namespace tfspa
