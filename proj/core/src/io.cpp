// Copyright 2026 The SqueezeLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "squeezelab/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace squeezelab {

namespace {

constexpr std::string_view kTraceMagic = "squeezelab-trace v1";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

double parse_field(std::string_view field, const std::string &source, std::size_t line) {
    field = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(source, line, "not a number: '" + std::string(field) + "'");
    }
    return v;
}

// Reads a two-column numeric CSV with the given header.
void read_pairs(std::istream &is, const std::string &source, std::string_view header,
                std::vector<double> &first, std::vector<double> &second) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (skippable(line)) {
            continue;
        }
        if (!have_header) {
            if (trim(line) != header) {
                throw ParseError(source, lineno,
                                 "expected header '" + std::string(header) + "', got '" +
                                     std::string(trim(line)) + "'");
            }
            have_header = true;
            continue;
        }
        const std::string_view view(line);
        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(source, lineno, "expected exactly 2 comma-separated fields");
        }
        first.push_back(parse_field(view.substr(0, comma), source, lineno));
        second.push_back(parse_field(view.substr(comma + 1), source, lineno));
    }
    if (!have_header) {
        throw ParseError(source, lineno, "missing header '" + std::string(header) + "'");
    }
    if (first.empty()) {
        throw ParseError(source, lineno, "no data rows");
    }
}

} // namespace

ParseError::ParseError(const std::string &source, std::size_t line, const std::string &message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                  : source + ": " + message),
      line_(line) {}

std::string format_exact(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_report(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", v);
    return buf.data();
}

void write_scan_csv(std::ostream &os, const HomodyneScan &scan) {
    scan.validate();
    os << "psi_rad,q\n";
    for (std::size_t j = 0; j < scan.size(); ++j) {
        os << format_exact(scan.phases[j]) << ',' << format_exact(scan.samples[j]) << '\n';
    }
}

HomodyneScan read_scan_csv(std::istream &is, const std::string &source) {
    HomodyneScan scan;
    read_pairs(is, source, "psi_rad,q", scan.phases, scan.samples);
    scan.config.n_samples = scan.size();
    return scan;
}

void write_dhd_csv(std::ostream &os, const DhdBatch &batch) {
    batch.validate();
    os << "q1,p2\n";
    for (std::size_t i = 0; i < batch.mu(); ++i) {
        os << format_exact(batch.q1[i]) << ',' << format_exact(batch.p2[i]) << '\n';
    }
}

DhdBatch read_dhd_csv(std::istream &is, const std::string &source) {
    DhdBatch batch;
    read_pairs(is, source, "q1,p2", batch.q1, batch.p2);
    return batch;
}

CsvKind sniff_csv(std::istream &is) {
    const auto start = is.tellg();
    std::string line;
    CsvKind kind = CsvKind::Unknown;
    while (std::getline(is, line)) {
        if (skippable(line)) {
            continue;
        }
        const auto t = trim(line);
        if (t == "psi_rad,q") {
            kind = CsvKind::Scan;
        } else if (t == "q1,p2") {
            kind = CsvKind::Dhd;
        }
        break;
    }
    is.clear();
    is.seekg(start);
    return kind;
}

void write_trace(std::ostream &os, const RawTrace &trace) {
    os << kTraceMagic << ", rate_hz=" << std::llround(trace.sample_rate_hz)
       << ", count=" << trace.samples.size() << '\n';
    std::vector<char> bytes(trace.samples.size() * 4);
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const auto u = std::bit_cast<std::uint32_t>(trace.samples[i]);
        for (int b = 0; b < 4; ++b) {
            bytes[4 * i + b] = static_cast<char>((u >> (8 * b)) & 0xFFu);
        }
    }
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

RawTrace read_trace(std::istream &is, const std::string &source) {
    std::string header;
    if (!std::getline(is, header)) {
        throw ParseError(source, 1, "empty trace file");
    }
    long long rate = 0;
    unsigned long long count = 0;
    const std::string expected = std::string(kTraceMagic) + ", rate_hz=%lld, count=%llu";
    if (header.rfind(kTraceMagic, 0) != 0 ||
        std::sscanf(header.c_str(), expected.c_str(), &rate, &count) != 2) {
        throw ParseError(source, 1, "bad trace header '" + header + "'");
    }
    if (rate <= 0) {
        throw ParseError(source, 1, "rate_hz must be positive");
    }
    RawTrace trace;
    trace.sample_rate_hz = static_cast<double>(rate);
    std::vector<char> bytes(count * 4);
    is.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    const auto got = static_cast<std::size_t>(is.gcount());
    if (got != bytes.size()) {
        throw ParseError(source, 0,
                         "truncated trace: header declares " + std::to_string(count) +
                             " samples, found " + std::to_string(got / 4));
    }
    trace.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b) {
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
        }
        trace.samples[i] = std::bit_cast<float>(u);
    }
    return trace;
}

void write_trace_file(const std::filesystem::path &path, const RawTrace &trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    write_trace(os, trace);
    if (!os) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

RawTrace read_trace_file(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error(path.string() + ": cannot open for reading");
    }
    return read_trace(is, path.string());
}

} // namespace squeezelab
