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

// Resolved configuration of one CLI run. Every field maps to a flat JSON key
// of the same name and to a `--flag` with dashes for underscores.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/estimators.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/simulator.hpp"
#include "squeezelab/state.hpp"

namespace squeezelab::cli {

inline constexpr std::uint64_t kDefaultSeed = 20260101;
inline constexpr const char *kSeedEnv = "SQUEEZELAB_SEED";

/// Invalid flag values, unknown keys, domain violations.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;

    // State. `s` is a number, a comma list, or a range "a:b[:step]".
    // kappa <= 0 selects the family kappa = 1 / sqrt(s).
    std::string s;
    double kappa = 0.0;
    double phi_s = 0.0;
    std::string family = "kappa-inv-sqrt-s";

    // Estimators. Empty means the command's default.
    std::string methods;
    unsigned mom_max_iter = 20;
    double mom_tol = 1e-6;
    std::string mom_solver = "closed-form";
    std::string mom_prior = "fit";

    // Sampling.
    std::size_t n_samples = 900;
    unsigned phase_periods = 2;
    std::string phase_sampling = "equispaced";
    std::size_t dhd_mu = 900;
    std::size_t trials = 3000;
    std::uint64_t seed = kDefaultSeed;
    std::string nonphysical = "include";
    /// Not echoed: output is identical for any worker count.
    unsigned workers = 0;

    // simulate
    std::string kind = "scan";

    // Temporal mode and trace geometry.
    double mode_fwhm_hz = 6e6;
    double sample_rate_hz = 100e6;
    double scan_duration_s = 500e-6;

    // Drift and tracking.
    std::string drift_kind = "mean-reverting";
    double drift_tau_s = 5e-3;
    double drift_step_s = 500e-6;
    double drift_amplitude_rad = 0.2;
    double duration_s = 0.3;

    // I/O. "-" is stdout.
    std::string input;
    std::string output = "-";
    std::string summary;
    std::string format = "csv";
};

/// Defaults, then SQUEEZELAB_SEED from the environment.
RunConfig default_config();

/// Overlays the keys present in `json_text` onto `base`. Unknown keys and
/// wrongly typed values raise ConfigError.
RunConfig merge_config_json(RunConfig base, std::string_view json_text, std::string_view source);

/// Compact JSON of every echoed field (everything except `workers`).
std::string config_to_json(const RunConfig &config);

/// Parses "0.3", "0.2,0.3,0.5" or "a:b[:step]" (step defaults to 0.05, the
/// end point is included when the grid lands on it).
std::vector<double> parse_s_values(std::string_view spec);

std::vector<Method> parse_methods(std::string_view list);

StateParams state_for(const RunConfig &config, double s);
ScanConfig scan_config(const RunConfig &config);
MomOptions mom_options(const RunConfig &config);
MonteCarloConfig monte_carlo_config(const RunConfig &config);
DriftModel drift_model(const RunConfig &config);
TemporalMode temporal_mode(const RunConfig &config);
TraceGeometry trace_geometry(const RunConfig &config);

} // namespace squeezelab::cli
