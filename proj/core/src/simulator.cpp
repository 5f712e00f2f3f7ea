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

#include "squeezelab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "squeezelab/random.hpp"

namespace squeezelab {

void ScanConfig::validate() const {
    if (n_samples == 0) {
        throw std::invalid_argument("scan config: n_samples must be >= 1");
    }
    if (phase_periods == 0) {
        throw std::invalid_argument("scan config: phase_periods must be >= 1");
    }
}

std::vector<double> equispaced_phases(const ScanConfig &config) {
    config.validate();
    const double span = std::numbers::pi * config.phase_periods;
    std::vector<double> phases(config.n_samples);
    for (std::size_t j = 0; j < config.n_samples; ++j) {
        phases[j] = span * static_cast<double>(j) / static_cast<double>(config.n_samples);
    }
    return phases;
}

void HomodyneScan::validate() const {
    if (samples.empty() || phases.size() != samples.size()) {
        throw std::invalid_argument("homodyne scan: phases and samples must have equal, "
                                    "non-zero length");
    }
}

void DhdBatch::validate() const {
    if (q1.empty() || q1.size() != p2.size()) {
        throw std::invalid_argument("dhd batch: q1 and p2 must have equal, non-zero length");
    }
}

HomodyneScan sample_homodyne_scan(const StateParams &params, const ScanConfig &config,
                                  std::uint64_t seed, std::uint32_t trial) {
    require_physical(params, "sample_homodyne_scan");
    HomodyneScan scan;
    scan.config = config;
    if (config.sampling == PhaseSampling::Equispaced) {
        scan.phases = equispaced_phases(config);
    } else {
        config.validate();
        RandomStream phase_rng(seed, StreamDomain::ScanPhases, trial);
        const double span = std::numbers::pi * config.phase_periods;
        scan.phases.resize(config.n_samples);
        for (double &psi : scan.phases) {
            psi = span * phase_rng.uniform();
        }
    }
    RandomStream rng(seed, StreamDomain::ScanSamples, trial);
    scan.samples.resize(config.n_samples);
    for (std::size_t j = 0; j < config.n_samples; ++j) {
        scan.samples[j] = std::sqrt(eval_variance(params, scan.phases[j])) * rng.normal();
    }
    return scan;
}

HomodyneScan expected_moment_scan(const StateParams &params, const ScanConfig &config) {
    HomodyneScan scan;
    scan.config = config;
    scan.phases = equispaced_phases(config);
    scan.samples.resize(scan.phases.size());
    for (std::size_t j = 0; j < scan.phases.size(); ++j) {
        scan.samples[j] = std::sqrt(eval_variance(params, scan.phases[j]));
    }
    return scan;
}

DhdBatch sample_dhd(const StateParams &params, std::size_t mu, std::uint64_t seed,
                    std::uint32_t trial) {
    require_physical(params, "sample_dhd");
    if (mu == 0) {
        throw std::invalid_argument("sample_dhd: mu must be >= 1");
    }
    const SymMatrix2 g = state_covariance(params) + SymMatrix2::identity();
    const double l11 = std::sqrt(g.xx);
    const double l21 = g.xp / l11;
    const double l22 = std::sqrt(g.pp - l21 * l21);

    RandomStream rng(seed, StreamDomain::Dhd, trial);
    DhdBatch batch;
    batch.q1.resize(mu);
    batch.p2.resize(mu);
    for (std::size_t i = 0; i < mu; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        batch.q1[i] = l11 * z1;
        batch.p2[i] = l21 * z1 + l22 * z2;
    }
    return batch;
}

void DriftModel::validate() const {
    if (!(correlation_time > 0.0) || !(step_interval > 0.0)) {
        throw std::invalid_argument("drift model: correlation_time and step_interval must be > 0");
    }
    if (!(amplitude >= 0.0)) {
        throw std::invalid_argument("drift model: amplitude must be >= 0");
    }
}

double PhaseTrajectory::at(double t) const {
    if (offsets.empty()) {
        return 0.0;
    }
    const double k = std::floor(t / step_interval + 1e-9);
    const auto idx = static_cast<std::size_t>(std::clamp(k, 0.0, double(offsets.size() - 1)));
    return offsets[idx];
}

PhaseTrajectory simulate_phase_drift(const DriftModel &model, double duration,
                                     std::uint64_t seed) {
    model.validate();
    if (!(duration > 0.0)) {
        throw std::invalid_argument("simulate_phase_drift: duration must be > 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor(duration / model.step_interval + 1e-9));
    PhaseTrajectory traj;
    traj.step_interval = model.step_interval;
    traj.offsets.resize(steps + 1);

    RandomStream rng(seed, StreamDomain::Drift);
    if (model.kind == DriftKind::MeanReverting) {
        const double rho = std::exp(-model.step_interval / model.correlation_time);
        const double innovation = model.amplitude * std::sqrt(1.0 - rho * rho);
        double x = model.amplitude * rng.normal();
        for (double &o : traj.offsets) {
            o = x;
            x = rho * x + innovation * rng.normal();
        }
    } else {
        const double step_sd =
            model.amplitude * std::sqrt(model.step_interval / model.correlation_time);
        double x = 0.0;
        for (double &o : traj.offsets) {
            o = x;
            x += step_sd * rng.normal();
        }
    }
    return traj;
}

double TemporalMode::decay_time() const { return 1.0 / (std::numbers::pi * fwhm_hz); }

void TemporalMode::validate() const {
    if (!(fwhm_hz > 0.0) || !(sample_rate_hz > 0.0) || window_len == 0) {
        throw std::invalid_argument("temporal mode: fwhm, sample rate and window length must be > 0");
    }
}

std::vector<double> TemporalMode::weights() const {
    validate();
    std::vector<double> w(window_len, 0.0);
    const double tau = decay_time() * sample_rate_hz; // in samples
    const double center = 0.5 * static_cast<double>(window_len - 1);
    double energy = 0.0;
    for (std::size_t k = 0; k < window_len; ++k) {
        const double t = std::abs(static_cast<double>(k) - center);
        if (t <= 5.0 * tau) {
            w[k] = std::exp(-t / tau);
            energy += w[k] * w[k];
        }
    }
    if (!(energy > 0.0)) {
        // Mode narrower than one sample: fall back to the nearest sample.
        w.assign(window_len, 0.0);
        w[window_len / 2] = 1.0;
        return w;
    }
    const double norm = 1.0 / std::sqrt(energy);
    for (double &x : w) {
        x *= norm;
    }
    return w;
}

std::size_t TraceGeometry::trace_len() const {
    return static_cast<std::size_t>(std::llround(scan_duration_s * sample_rate_hz));
}

std::size_t TraceGeometry::window_len(std::size_t n_windows) const {
    if (n_windows == 0) {
        throw std::invalid_argument("trace geometry: n_windows must be >= 1");
    }
    return trace_len() / n_windows;
}

RawTrace synthesize_trace(std::span<const StateParams> params_per_window,
                          const TemporalMode &mode, const ScanConfig &scan,
                          const TraceGeometry &geometry, std::uint64_t seed,
                          std::uint32_t trial) {
    scan.validate();
    mode.validate();
    if (params_per_window.size() != scan.n_samples) {
        throw ConfigMismatch("synthesize_trace: need one state per window (" +
                             std::to_string(scan.n_samples) + "), got " +
                             std::to_string(params_per_window.size()));
    }
    if (scan.sampling != PhaseSampling::Equispaced) {
        throw ConfigMismatch("synthesize_trace: traces carry no phase channel; use equispaced phases");
    }
    if (mode.sample_rate_hz != geometry.sample_rate_hz) {
        throw ConfigMismatch("synthesize_trace: mode sample rate differs from trace rate");
    }
    const std::size_t len = geometry.trace_len();
    const std::size_t wl = mode.window_len;
    if (wl * scan.n_samples > len) {
        throw ConfigMismatch("synthesize_trace: " + std::to_string(scan.n_samples) +
                             " windows of " + std::to_string(wl) + " samples exceed trace length " +
                             std::to_string(len));
    }
    for (const auto &p : params_per_window) {
        require_physical(p, "synthesize_trace");
    }

    const std::vector<double> f = mode.weights();
    const std::vector<double> phases = equispaced_phases(scan);
    RawTrace trace;
    trace.sample_rate_hz = geometry.sample_rate_hz;
    trace.samples.resize(len);

    std::vector<double> z(wl);
    for (std::size_t j = 0; j < scan.n_samples; ++j) {
        RandomStream rng(seed, StreamDomain::TraceWindow, trial, static_cast<std::uint32_t>(j));
        const double q = std::sqrt(eval_variance(params_per_window[j], phases[j])) * rng.normal();
        double proj = 0.0;
        for (std::size_t t = 0; t < wl; ++t) {
            z[t] = rng.normal();
            proj += f[t] * z[t];
        }
        float *out = trace.samples.data() + j * wl;
        for (std::size_t t = 0; t < wl; ++t) {
            out[t] = static_cast<float>(q * f[t] + z[t] - proj * f[t]);
        }
    }
    RandomStream tail(seed, StreamDomain::TraceTail, trial);
    for (std::size_t t = wl * scan.n_samples; t < len; ++t) {
        trace.samples[t] = static_cast<float>(tail.normal());
    }
    return trace;
}

std::vector<double> apply_temporal_mode(const RawTrace &trace, const TemporalMode &mode,
                                        const WindowSpec &windows) {
    mode.validate();
    if (windows.window_len != mode.window_len) {
        throw ConfigMismatch("apply_temporal_mode: window length " +
                             std::to_string(windows.window_len) + " differs from mode length " +
                             std::to_string(mode.window_len));
    }
    if (windows.offset + windows.count * windows.window_len > trace.samples.size()) {
        throw ConfigMismatch("apply_temporal_mode: windows extend past the trace end (" +
                             std::to_string(trace.samples.size()) + " samples)");
    }
    const std::vector<double> f = mode.weights();
    std::vector<double> q(windows.count);
    for (std::size_t j = 0; j < windows.count; ++j) {
        const float *x = trace.samples.data() + windows.offset + j * windows.window_len;
        double acc = 0.0;
        for (std::size_t t = 0; t < windows.window_len; ++t) {
            acc += f[t] * static_cast<double>(x[t]);
        }
        q[j] = acc;
    }
    return q;
}

HomodyneScan scan_from_trace(const RawTrace &trace, const TemporalMode &mode,
                             const ScanConfig &scan) {
    HomodyneScan out;
    out.config = scan;
    out.phases = equispaced_phases(scan);
    out.samples = apply_temporal_mode(trace, mode, {0, mode.window_len, scan.n_samples});
    return out;
}

ModeWidthTable::ModeWidthTable(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("mode width table: no points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto [w, s] = points_[i];
        if (!(w > 0.0) || !(s > 0.0 && s <= 1.0)) {
            throw std::invalid_argument("mode width table: need fwhm > 0 and s in (0, 1]");
        }
        if (i > 0 && !(w > points_[i - 1].first)) {
            throw std::invalid_argument("mode width table: fwhm must be strictly increasing");
        }
    }
}

double ModeWidthTable::s_at(double fwhm_hz) const {
    if (fwhm_hz <= points_.front().first) {
        return points_.front().second;
    }
    if (fwhm_hz >= points_.back().first) {
        return points_.back().second;
    }
    const auto hi = std::lower_bound(points_.begin(), points_.end(), fwhm_hz,
                                     [](const auto &p, double w) { return p.first < w; });
    const auto lo = hi - 1;
    const double t = (fwhm_hz - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

StateParams ModeWidthTable::state_at(double fwhm_hz, double phi_s) const {
    return empirical_family(s_at(fwhm_hz), phi_s);
}

} // namespace squeezelab
