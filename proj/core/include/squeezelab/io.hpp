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

/**
 * @file
 * Data file formats.
 *
 * Scan CSV:   header `psi_rad,q`, one sample per row.
 * DHD CSV:    header `q1,p2`, one repetition per row.
 * Raw trace:  ASCII header line
 *               squeezelab-trace v1, rate_hz=<int>, count=<int>\n
 *             followed by `count` IEEE-754 binary32 samples, little-endian.
 *
 * CSV readers skip blank lines and lines starting with '#'. Data values are
 * written in shortest round-trip form so a file reproduces the in-memory
 * doubles exactly.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "squeezelab/scan.hpp"
#include "squeezelab/simulator.hpp"

namespace squeezelab {

/// Malformed input. line() is 1-based, or 0 when not tied to a line.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &source, std::size_t line, const std::string &message);
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_exact(double v);
/// 12 significant digits; "inf" / "-inf" / "nan" for non-finite values.
std::string format_report(double v);

void write_scan_csv(std::ostream &os, const HomodyneScan &scan);
/// `source` names the input in error messages.
HomodyneScan read_scan_csv(std::istream &is, const std::string &source = "<scan>");

void write_dhd_csv(std::ostream &os, const DhdBatch &batch);
DhdBatch read_dhd_csv(std::istream &is, const std::string &source = "<dhd>");

enum class CsvKind { Scan, Dhd, Unknown };
/// Looks at the first non-comment line of a CSV stream without consuming it
/// for the caller (the stream is rewound).
CsvKind sniff_csv(std::istream &is);

void write_trace(std::ostream &os, const RawTrace &trace);
RawTrace read_trace(std::istream &is, const std::string &source = "<trace>");

void write_trace_file(const std::filesystem::path &path, const RawTrace &trace);
RawTrace read_trace_file(const std::filesystem::path &path);

} // namespace squeezelab
