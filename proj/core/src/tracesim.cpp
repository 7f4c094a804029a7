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

#include "tfspa/tracesim.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>
#include <system_error>
#include <utility>

namespace tfspa {

HammingTrace::HammingTrace(int key_bits, NoiseModel noise)
    : key_bits_(key_bits), rounds_(rounds_for_key_bits(key_bits)), noise_(noise),
      hv_(static_cast<std::size_t>(kSubkeyCount) * kRows * rounds_, 0.0),
      hw_(hv_.size(), 0.0) {}

HammingTrace simulate_trace(const SecretKey &key, NoiseModel noise) {
    if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
        throw std::invalid_argument("sigma must be a finite non-negative number");

    const ScheduleIntermediates s = compute_intermediates(key);
    HammingTrace trace(key.key_bits(), noise);
    const int rounds = key.rounds();
    for (int i = 0; i < kSubkeyCount; ++i)
        for (int j = 0; j < kRows; ++j)
            for (int k = 0; k < rounds; ++k) {
                trace.hv(i, j, k) = hamming(s.v(i, j, k));
                trace.hw(i, j, k) = hamming(s.w(i, j, k));
            }

    if (noise.sigma > 0.0) {
        std::mt19937_64 rng(noise.seed);
        std::normal_distribution<double> eps(0.0, noise.sigma);
        for (double &x : trace.hv_values())
            x += eps(rng);
        for (double &x : trace.hw_values())
            x += eps(rng);
    }
    return trace;
}

std::vector<HammingTrace> multi_trace(const SecretKey &key, double sigma, std::size_t n,
                                      std::uint64_t base_seed) {
    if (n == 0)
        throw std::invalid_argument("multi_trace needs at least one reading");
    std::vector<HammingTrace> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        out.push_back(simulate_trace(key, {sigma, reading_seed(base_seed, r)}));
    return out;
}

namespace {

void put_real(std::ostream &out, double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
}

template <typename T> bool parse_number(std::string_view text, T &value) {
    const char *first = text.data();
    const char *last = first + text.size();
    const auto res = std::from_chars(first, last, value);
    return res.ec == std::errc{} && res.ptr == last;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    return s;
}

class LineReader {
  public:
    explicit LineReader(std::istream &in) : in_(in) {}
    bool next(std::string &line) {
        if (!std::getline(in_, line))
            return false;
        ++number_;
        return true;
    }
    [[nodiscard]] std::size_t number() const { return number_; }

  private:
    std::istream &in_;
    std::size_t number_ = 0;
};

void read_section(LineReader &reader, const std::string &name, std::vector<double> &values,
                  bool last) {
    std::string line;
    if (!reader.next(line))
        throw TraceFormatError(name, "truncated payload: missing section marker");
    if (trim(line) != name + ":")
        throw TraceFormatError(name, "expected section marker '" + name + ":'");

    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!reader.next(line))
            throw TraceFormatError(name, "truncated payload: " + std::to_string(n) + " of " +
                                             std::to_string(values.size()) + " values");
        const std::string_view text = trim(line);
        if (text.size() >= 2 && text.back() == ':')
            throw TraceFormatError(name, "index-range mismatch: section has " + std::to_string(n) +
                                             " values, expected " +
                                             std::to_string(values.size()));
        double x = 0.0;
        if (!parse_number(text, x) || !std::isfinite(x))
            throw TraceFormatError(name, "malformed value on line " +
                                             std::to_string(reader.number()));
        values[n] = x;
    }

    if (last) {
        while (reader.next(line)) {
            if (!trim(line).empty())
                throw TraceFormatError(name, "index-range mismatch: more than " +
                                                 std::to_string(values.size()) + " values");
        }
    }
}

} // namespace

void write_trace(const HammingTrace &trace, std::ostream &out) {
    out << kTraceMagic << ' ' << trace.key_bits() << ' ' << trace.rounds() << ' ';
    put_real(out, trace.noise().sigma);
    out << ' ' << trace.noise().seed << '\n';
    out << "V:\n";
    for (double x : trace.hv_values()) {
        put_real(out, x);
        out << '\n';
    }
    out << "W:\n";
    for (double x : trace.hw_values()) {
        put_real(out, x);
        out << '\n';
    }
}

void write_trace(const HammingTrace &trace, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open trace file for writing: " + path.string());
    write_trace(trace, out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing trace file: " + path.string());
}

HammingTrace read_trace(std::istream &in) {
    LineReader reader(in);
    std::string header;
    if (!reader.next(header))
        throw TraceFormatError("header", "malformed header: empty input");

    std::istringstream fields{std::string(trim(header))};
    std::string magic, bits_text, rounds_text, sigma_text, seed_text, extra;
    fields >> magic >> bits_text >> rounds_text >> sigma_text >> seed_text;
    if (magic != kTraceMagic) {
        if (magic.rfind("TFSPA", 0) == 0)
            throw TraceFormatError("version", "wrong version '" + magic + "', expected " +
                                                  kTraceMagic);
        throw TraceFormatError("magic", "malformed header: missing " + std::string(kTraceMagic));
    }
    if (seed_text.empty())
        throw TraceFormatError("header", "malformed header: expected 5 fields");
    if (fields >> extra)
        throw TraceFormatError("header", "malformed header: unexpected field '" + extra + "'");

    int key_bits = 0;
    if (!parse_number(bits_text, key_bits))
        throw TraceFormatError("key_bits", "malformed header value '" + bits_text + "'");
    if (key_bits != 128 && key_bits != 192 && key_bits != 256)
        throw TraceFormatError("key_bits", "unsupported key size " + bits_text);
    int rounds = 0;
    if (!parse_number(rounds_text, rounds))
        throw TraceFormatError("R", "malformed header value '" + rounds_text + "'");
    if (rounds != key_bits / 64)
        throw TraceFormatError("R", "index-range mismatch: R=" + rounds_text + " for " +
                                        bits_text + "-bit key");
    NoiseModel noise;
    if (!parse_number(sigma_text, noise.sigma) || !std::isfinite(noise.sigma) || noise.sigma < 0)
        throw TraceFormatError("sigma", "malformed header value '" + sigma_text + "'");
    if (!parse_number(seed_text, noise.seed))
        throw TraceFormatError("seed", "malformed header value '" + seed_text + "'");

    HammingTrace trace(key_bits, noise);
    read_section(reader, "V", trace.hv_values(), false);
    read_section(reader, "W", trace.hw_values(), true);
    return trace;
}

HammingTrace read_trace(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + path.string());
    return read_trace(in);
}

} // namespace tfspa
