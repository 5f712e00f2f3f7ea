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
 * Repeated simulate-then-estimate trials and their statistics.
 *
 * Trial i of a run always draws its data from the stream (seed, trial = i),
 * whichever worker executes it, and the per-trial estimates are merged in
 * trial order before aggregation. Aggregation itself sorts every summand, so
 * the report does not depend on trial order either. Together these make the
 * output identical for any worker count.
 *
 * Angles are aggregated with directional statistics on 2 phi_s, so estimates
 * that straddle 0 / pi do not inflate the variance.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/bounds.hpp"
#include "squeezelab/estimators.hpp"
#include "squeezelab/matrix.hpp"
#include "squeezelab/scan.hpp"
#include "squeezelab/simulator.hpp"
#include "squeezelab/state.hpp"

namespace squeezelab {

/// Whether non-physical trials enter `empirical_cov`. Both covariances are
/// always computed and reported.
enum class NonPhysicalPolicy { Include, Exclude };

/// Where the iterated moment estimator starts.
enum class PriorPolicy {
    FitSeed, ///< clamped fit estimate of the same scan (no knowledge of the truth)
    Truth,   ///< the true parameters
};

struct MonteCarloConfig {
    ScanConfig scan;
    std::size_t dhd_mu = 900;
    MomOptions mom;
    PriorPolicy prior = PriorPolicy::FitSeed;
    NonPhysicalPolicy nonphysical = NonPhysicalPolicy::Include;
    /// Threads used by run_trials. 0 means std::thread::hardware_concurrency().
    unsigned workers = 1;
    /// Keep every per-trial estimate in the report.
    bool keep_estimates = false;

    void validate() const;
};

/// Theoretical curves at one parameter point.
struct TheoryRow {
    StateParams params;
    BoundVector crb_homodyne;
    BoundVector fit_prediction;
    BoundVector crb_dhd;
    BoundVector qcrb;
};

/// What aggregation needs from one trial.
struct TrialEstimate {
    StateParams params;
    bool physical = true;
    unsigned iterations = 0;
};

struct TrialReport {
    StateParams truth;
    Method method = Method::Fit;
    std::size_t trials = 0;
    std::size_t physical_trials = 0;

    /// Per the configured policy.
    SymMatrix3 empirical_cov;
    SymMatrix3 empirical_cov_all;
    SymMatrix3 empirical_cov_physical;
    /// Standard error of each diagonal entry of empirical_cov,
    /// sqrt(2 / (n - 1)) * variance.
    std::array<double, 3> variance_se{};

    /// Mean estimate (circular mean for phi_s) over the policy's trial set.
    StateParams mean;
    /// mean - truth, with the angle difference taken modulo pi.
    std::array<double, 3> bias{};
    double nonphysical_rate = 0.0;

    /// Cramer-Rao bound of the measurement: homodyne for Fit and MoM,
    /// double homodyne for DHD.
    BoundVector bound;
    /// Theoretical variance of the estimator itself (equal to the bound
    /// except for Fit).
    BoundVector prediction;
    std::array<double, 3> saturation_ratio{};
    std::array<double, 3> prediction_ratio{};
    /// All theoretical curves at the truth.
    TheoryRow theory;

    /// Squeezing level 10 log10(kappa s) over physical trials.
    double squeezing_db_mean = 0.0;
    double squeezing_db_std = 0.0;

    /// iteration_histogram[k] counts trials that used k iterations.
    std::vector<std::size_t> iteration_histogram;
    /// Filled only with MonteCarloConfig::keep_estimates.
    std::vector<TrialEstimate> estimates;
};

/// Runs one trial: fresh data from stream (seed, trial), then one estimate.
EstimateResult run_single_trial(const StateParams &truth, Method method,
                                const MonteCarloConfig &config, std::uint64_t seed,
                                std::uint32_t trial);

/// Order-independent statistics of a set of trial estimates. Requires
/// estimates.size() >= 2.
TrialReport aggregate_trials(const StateParams &truth, Method method,
                             std::span<const TrialEstimate> estimates,
                             const MonteCarloConfig &config);

TrialReport run_trials(const StateParams &truth, Method method, const MonteCarloConfig &config,
                       std::size_t trials, std::uint64_t seed);

TheoryRow theory_row(const StateParams &params, const MonteCarloConfig &config);

/// Sample-size-scaled theoretical curves over the family kappa = 1 / sqrt(s),
/// or at a fixed kappa when `fixed_kappa` > 0.
std::vector<TheoryRow> theory_table(std::span<const double> s_values,
                                    const MonteCarloConfig &config, double fixed_kappa = 0.0);

/// run_trials for each (s, method) on the family kappa = 1 / sqrt(s).
/// Every s point gets its own derived seed; methods at the same point share
/// it, so Fit and MoM see identical scans.
std::vector<TrialReport> sweep_family(std::span<const double> s_values,
                                      std::span<const Method> methods,
                                      const MonteCarloConfig &config, std::size_t trials,
                                      std::uint64_t seed);

/// Seed used for the i-th point of a sweep.
std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t point_index);

struct AnglePoint {
    double t = 0.0;
    double phi_true = 0.0;
    double phi_est = 0.0;
    /// sqrt of the predicted angle variance at the estimate.
    double half_width = 0.0;
    bool physical = true;
};

struct AngleTrack {
    DriftModel drift;
    StateParams base;
    std::vector<AnglePoint> points;

    /// Estimated angles unwrapped modulo pi into a continuous series.
    [[nodiscard]] std::vector<double> unwrapped_estimates() const;
    /// Root-mean-square of the circular tracking error.
    [[nodiscard]] double rms_error() const;
    /// Circular standard deviation of the estimates (directional statistics on 2 phi).
    [[nodiscard]] double estimate_spread() const;
};

/// One scan per drift step (the scan duration equals drift.step_interval).
/// Each scan is estimated with mom_estimate, using the previous estimate as
/// prior when that estimate was physical.
AngleTrack track_angle(const DriftModel &drift, const StateParams &base,
                       const ScanConfig &scan, double duration, std::uint64_t seed,
                       const MomOptions &options = {});

/// Correlation time of one or more series sampled every `dt`: the pooled
/// autocorrelation is fitted with ln rho(k) = a - k dt / tau over lags
/// 1..K, where K is the last lag before rho drops to `rho_floor`.
/// Returns NaN when fewer than two lags qualify.
double estimate_correlation_time(std::span<const std::vector<double>> series, double dt,
                                 double rho_floor = 0.2);

/// Circular mean and directional variance of angles modulo pi.
struct CircularStats {
    double mean = 0.0;
    double variance = 0.0;
    double resultant = 0.0;
};
CircularStats circular_stats(std::span<const double> angles);

/// Report CSV, one row per (report, parameter). `comment`, when non-empty, is
/// emitted first as a `#` line.
void write_report_csv(std::ostream &os, std::span<const TrialReport> reports,
                      std::string_view comment = {});
void write_theory_csv(std::ostream &os, std::span<const TheoryRow> rows,
                      std::string_view comment = {});
/// JSON document with "config" (the given JSON text, if any) and "reports".
void write_report_json(std::ostream &os, std::span<const TrialReport> reports,
                       std::string_view config_json = {});

void write_track_csv(std::ostream &os, const AngleTrack &track, std::string_view comment = {});
/// Summary of a track: RMS error, spread, correlation time, bound.
void write_track_json(std::ostream &os, const AngleTrack &track, std::size_t n_samples,
                      std::string_view config_json = {});

} // namespace squeezelab
