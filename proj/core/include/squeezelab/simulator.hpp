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
 * Synthetic measurement data: homodyne scans, double-homodyne batches,
 * squeezing-angle drift, and raw digitizer traces that carry quadratures in a
 * temporal mode.
 *
 * All generators are pure functions of their arguments. Randomness is drawn
 * from RandomStream keyed by (seed, trial, window), see random.hpp.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "squeezelab/scan.hpp"
#include "squeezelab/state.hpp"

namespace squeezelab {

/// Raised when trace, window and mode geometries do not fit together.
class ConfigMismatch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Homodyne scan with q_j ~ N(0, V(psi_j)). Deterministic in (seed, trial).
HomodyneScan sample_homodyne_scan(const StateParams &params, const ScanConfig &config,
                                  std::uint64_t seed, std::uint32_t trial = 0);

/// Noise-free scan whose squared samples equal the model variances exactly
/// (q_j = sqrt(V(psi_j))). Used to check estimator identities.
HomodyneScan expected_moment_scan(const StateParams &params, const ScanConfig &config);

/// mu samples of (q1, p2) ~ N(0, Gamma_theta + I).
DhdBatch sample_dhd(const StateParams &params, std::size_t mu, std::uint64_t seed,
                    std::uint32_t trial = 0);

enum class DriftKind { RandomWalk, MeanReverting };

/// Stochastic model of the squeezing angle phi_s(t).
///
/// MeanReverting is an Ornstein-Uhlenbeck process with stationary standard
/// deviation `amplitude` and autocorrelation exp(-dt / correlation_time).
/// RandomWalk diffuses with variance amplitude^2 per correlation_time.
struct DriftModel {
    DriftKind kind = DriftKind::MeanReverting;
    double correlation_time = 5e-3;
    double step_interval = 500e-6;
    double amplitude = 0.2;

    void validate() const;
};

/// Angle offsets sampled every `step_interval`, starting at t = 0.
struct PhaseTrajectory {
    double step_interval = 0.0;
    std::vector<double> offsets;

    /// Offset in effect at time t (piecewise constant between steps).
    [[nodiscard]] double at(double t) const;
};

PhaseTrajectory simulate_phase_drift(const DriftModel &model, double duration,
                                     std::uint64_t seed);

enum class ModeShape { DoubleExponential };

/// Temporal mode applied to the raw photocurrent.
///
/// The double exponential is exp(-|t| / tau) with tau = 1 / (pi * fwhm_hz),
/// truncated at +-5 tau and centered in a window of `window_len` samples.
struct TemporalMode {
    ModeShape shape = ModeShape::DoubleExponential;
    double fwhm_hz = 6e6;
    double sample_rate_hz = 100e6;
    std::size_t window_len = 55;

    [[nodiscard]] double decay_time() const;
    /// Unit-energy weights, length window_len.
    [[nodiscard]] std::vector<double> weights() const;
    void validate() const;
};

/// Timing of one phase scan as recorded by the digitizer.
struct TraceGeometry {
    double scan_duration_s = 500e-6;
    double sample_rate_hz = 100e6;

    [[nodiscard]] std::size_t trace_len() const;
    /// floor(trace_len / n_windows); the remainder is left at the trace end.
    [[nodiscard]] std::size_t window_len(std::size_t n_windows) const;
};

/// Raw digitizer samples. Stored as 32-bit floats, matching the trace file.
struct RawTrace {
    double sample_rate_hz = 0.0;
    std::vector<float> samples;
};

/// Builds a raw trace in which window j carries a quadrature drawn from
/// N(0, V(psi_j, params_per_window[j])) along the mode function, plus
/// unit-variance noise in the orthogonal complement. Samples past the last
/// window are vacuum noise.
///
/// Throws ConfigMismatch if params_per_window.size() != scan.n_samples,
/// the mode's rate differs from the geometry's, or the windows overflow.
RawTrace synthesize_trace(std::span<const StateParams> params_per_window,
                          const TemporalMode &mode, const ScanConfig &scan,
                          const TraceGeometry &geometry, std::uint64_t seed,
                          std::uint32_t trial = 0);

/// Contiguous windows of equal length.
struct WindowSpec {
    std::size_t offset = 0;
    std::size_t window_len = 0;
    std::size_t count = 0;
};

/// q_j = sum_t f(t) x(offset + j * window_len + t) for each window.
std::vector<double> apply_temporal_mode(const RawTrace &trace, const TemporalMode &mode,
                                        const WindowSpec &windows);

/// apply_temporal_mode over the scan geometry, paired with equispaced phases.
HomodyneScan scan_from_trace(const RawTrace &trace, const TemporalMode &mode,
                             const ScanConfig &scan);

/// Caller-supplied monotone map from mode width to the s parameter, used to
/// place a mode width on the kappa = 1/sqrt(s) family.
class ModeWidthTable {
  public:
    /// Points (fwhm_hz, s) sorted by strictly increasing fwhm_hz.
    explicit ModeWidthTable(std::vector<std::pair<double, double>> points);

    /// Linear interpolation, clamped at both ends.
    [[nodiscard]] double s_at(double fwhm_hz) const;
    [[nodiscard]] StateParams state_at(double fwhm_hz, double phi_s = 0.0) const;

  private:
    std::vector<std::pair<double, double>> points_;
};

} // namespace squeezelab
