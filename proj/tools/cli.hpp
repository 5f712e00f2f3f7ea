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

// Entry point of the `squeezelab` tool, callable in-process.
//
//   squeezelab bounds    theoretical curves over an s grid (CSV)
//   squeezelab simulate  scan CSV, DHD CSV or raw trace
//   squeezelab estimate  estimates from a data file (JSON)
//   squeezelab benchmark Monte Carlo reports (CSV or JSON)
//   squeezelab track     squeezing-angle tracking under drift (CSV + JSON summary)

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace squeezelab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitIo = 3,
    kExitParse = 4,
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// `args` excludes the program name. Data written to "-" goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace squeezelab::cli
