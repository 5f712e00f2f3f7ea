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


// Acceptance suite. `acceptance` runs every criterion, `acceptance N` only
// criterion N. Each criterion prints indented detail lines followed by one
// `criterion N: PASS|FAIL ...` line. The exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "run_config.hpp"
#include "squeezelab/bounds.hpp"
#include "squeezelab/estimators.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/random.hpp"
#include "squeezelab/simulator.hpp"

namespace sl = squeezelab;

namespace {

constexpr std::uint64_t kSeed = sl::cli::kDefaultSeed;
constexpr std::size_t kTrials = 3000;
constexpr std::size_t kScanSamples = 900;
const std::vector<double> kSweep = {0.21, 0.3, 0.4, 0.5, 0.7};

// Statistical window on empirical / theoretical variance.
constexpr double kRatioLo = 0.85;
constexpr double kRatioHi = 1.20;

void detail(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char *fmt, ...) {
    std::fputs("  ", stdout);
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::fputc('\n', stdout);
}

bool in_window(double r, double lo = kRatioLo, double hi = kRatioHi) { return r >= lo && r <= hi; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

sl::MonteCarloConfig base_config() {
    sl::MonteCarloConfig c;
    c.scan.n_samples = kScanSamples;
    c.scan.phase_periods = 2;
    c.dhd_mu = 900;
    c.workers = 0;
    return c;
}

const char *param_name(std::size_t i) {
    static const char *names[] = {"s", "kappa", "phi_s"};
    return names[i];
}

// 1. The moment estimator saturates the homodyne bound.
bool criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    for (std::size_t i = 0; i < kSweep.size(); ++i) {
        const sl::TrialReport r = sl::run_trials(sl::empirical_family(kSweep[i]), sl::Method::MoM,
                                                 base_config(), kTrials,
                                                 sl::sweep_point_seed(kSeed, i));
        for (std::size_t p = 0; p < 3; ++p) {
            const bool good = in_window(r.saturation_ratio[p]);
            ok = ok && good;
            detail("s=%.2f %-5s var/crb=%.4f (se %.3f)%s", kSweep[i], param_name(p),
                   r.saturation_ratio[p], r.variance_se[p] / r.bound[p], good ? "" : "  <-- out");
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail("runtime %.1f s (limit 120 s)", secs);
    return ok && secs < 120.0;
}

// 2. The least-squares fit follows its own variance prediction and sits far
// above the bound at strong squeezing.
bool criterion_2() {
    bool ok = true;
    for (std::size_t i = 0; i < kSweep.size(); ++i) {
        const sl::TrialReport r = sl::run_trials(sl::empirical_family(kSweep[i]), sl::Method::Fit,
                                                 base_config(), kTrials,
                                                 sl::sweep_point_seed(kSeed, i));
        for (std::size_t p = 0; p < 3; ++p) {
            const bool good = in_window(r.prediction_ratio[p], 0.85, 1.15);
            ok = ok && good;
            detail("s=%.2f %-5s var/prediction=%.4f (se %.3f)  var/crb=%.3f analytic %.3f%s",
                   kSweep[i], param_name(p), r.prediction_ratio[p],
                   r.variance_se[p] / r.prediction[p], r.saturation_ratio[p],
                   r.prediction[p] / r.bound[p], good ? "" : "  <-- out");
        }
    }
    const sl::StateParams pure{0.2, 1.0, 0.0};
    const double headline = sl::fit_variance_prediction(pure, kScanSamples).var_s /
                            sl::crb_homodyne(pure, kScanSamples).var_s;
    const bool headline_ok = std::abs(headline - 13.8) < 0.05;
    ok = ok && headline_ok;
    detail("fit/crb for s at s=0.2, kappa=1: %.4f (expected about 13.8)", headline);

    double worst = 1e300;
    for (int k = 1; k <= 40; ++k) {
        const double s = 0.005 * k;
        for (const sl::StateParams &p : {sl::empirical_family(s), sl::StateParams{s, 1.0, 0.0}}) {
            const auto fit = sl::fit_variance_prediction(p, kScanSamples);
            const auto crb = sl::crb_homodyne(p, kScanSamples);
            worst = std::min({worst, fit.var_s / crb.var_s, fit.var_kappa / crb.var_kappa});
        }
    }
    const bool order_ok = worst > 10.0;
    ok = ok && order_ok;
    detail("min fit/crb over s in (0, 0.2], s and kappa, family and kappa=1: %.3f (> 10)", worst);
    return ok;
}

// 3. Synthetic twin of the headline measurement.
bool criterion_3() {
    const sl::StateParams truth = sl::make_state(0.2089, 2.188, 0.0);
    const auto mc = base_config();
    const sl::TrialReport mom = sl::run_trials(truth, sl::Method::MoM, mc, kTrials, kSeed);
    const sl::TrialReport fit = sl::run_trials(truth, sl::Method::Fit, mc, kTrials, kSeed);
    const double level_mom = -mom.squeezing_db_mean;
    const double level_fit = -fit.squeezing_db_mean;
    detail("truth: %.3f dB", -sl::squeezing_db(truth));
    detail("MoM: level %.3f dB, std %.3f dB (limit 0.4), mean offset %.3f dB (limit 0.2)",
           level_mom, mom.squeezing_db_std, level_mom - sl::kReferenceSqueezingDb);
    detail("fit: level %.3f dB, std %.3f dB (needs >= 0.8), %zu of %zu trials physical",
           level_fit, fit.squeezing_db_std, fit.physical_trials, fit.trials);

    // Spread implied by the bound, with the s-kappa covariance included.
    const auto info = sl::fisher_homodyne_discrete(truth, sl::equispaced_phases(mc.scan));
    const sl::SymMatrix3 cov = sl::covariance_from_information(info);
    const double c = 10.0 / std::log(10.0);
    const double bound_db = c * std::sqrt(cov(0, 0) / (truth.s * truth.s) +
                                          cov(1, 1) / (truth.kappa * truth.kappa) +
                                          2.0 * cov(0, 1) / (truth.s * truth.kappa));
    detail("std of the level for an efficient estimator (bound): %.3f dB", bound_db);

    const bool mom_std = mom.squeezing_db_std <= 0.4;
    const bool mom_mean = std::abs(level_mom - sl::kReferenceSqueezingDb) <= 0.2;
    const bool fit_std = fit.squeezing_db_std >= 0.8;
    detail("checks: mom std %s, mom mean %s, fit std %s", mom_std ? "ok" : "FAIL",
           mom_mean ? "ok" : "FAIL", fit_std ? "ok" : "FAIL");
    return mom_std && mom_mean && fit_std;
}

// 4. Double-homodyne estimator and bound orderings.
bool criterion_4() {
    bool ok = true;
    const std::vector<double> points = {0.21, 0.4, 0.7};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const sl::TrialReport r =
            sl::run_trials(sl::empirical_family(points[i]), sl::Method::DHD, base_config(),
                           kTrials, sl::sweep_point_seed(kSeed, 100 + i));
        for (std::size_t p = 0; p < 3; ++p) {
            const bool good = in_window(r.saturation_ratio[p]);
            ok = ok && good;
            detail("s=%.2f %-5s var/crb_dhd=%.4f%s", points[i], param_name(p),
                   r.saturation_ratio[p], good ? "" : "  <-- out");
        }
    }

    // Closed-form bounds against the inverted information matrices.
    double worst_identity = 0.0;
    int family_violations = 0, pure_violations = 0;
    for (int k = 0; k < 80; ++k) {
        const double s = 0.2 + 0.01 * k; // up to 0.99
        for (double kappa : {1.0 / std::sqrt(s), 1.05}) {
            const sl::StateParams p{s, kappa, 0.3};
            const auto dhd = sl::crb_dhd(p, 900);
            const auto hom = sl::crb_homodyne(p, kScanSamples);
            const auto dhd_inv = sl::covariance_from_information(sl::fisher_dhd(p));
            const auto hom_inv = sl::covariance_from_information(
                sl::fisher_homodyne_per_sample(p, 1u << 14));
            for (std::size_t a = 0; a < 3; ++a) {
                worst_identity = std::max(worst_identity, rel(dhd_inv(a, a) / 900.0, dhd[a]));
                worst_identity =
                    std::max(worst_identity, rel(hom_inv(a, a) / double(kScanSamples), hom[a]));
            }
            if (kappa != 1.05) {
                family_violations += dhd.var_s < hom.var_s ? 0 : 1;
                family_violations += dhd.var_kappa > hom.var_kappa ? 0 : 1;
            } else if (s <= 0.7) {
                pure_violations += hom.var_s < dhd.var_s ? 0 : 1;
                pure_violations += hom.var_kappa < dhd.var_kappa ? 0 : 1;
            }
        }
    }
    detail("closed-form bounds vs inverted information: max rel diff %.2e (limit 1e-10)",
           worst_identity);
    detail("family s in [0.2, 0.99]: dhd better for s, homodyne better for kappa; %d violations",
           family_violations);
    detail("kappa=1.05, s in [0.2, 0.7]: homodyne better for s and kappa; %d violations",
           pure_violations);
    return ok && worst_identity < 1e-10 && family_violations == 0 && pure_violations == 0;
}

// 5. Discrete phase sum against the continuous-scan bound.
bool criterion_5() {
    bool ok = true;
    const std::vector<sl::StateParams> states = {sl::empirical_family(0.21, 0.4),
                                                 sl::empirical_family(0.5, 1.1),
                                                 sl::StateParams{0.5, std::sqrt(2.0), 0.3},
                                                 sl::StateParams{0.8, 1.05, 2.9}};
    for (std::size_t n : {std::size_t{900}, std::size_t{100000}}) {
        const double limit = n == 900 ? 1e-2 : 1e-4;
        double worst = 0.0;
        sl::ScanConfig scan;
        scan.n_samples = n;
        const auto phases = sl::equispaced_phases(scan);
        for (const auto &p : states) {
            const auto cov = sl::covariance_from_information(sl::fisher_homodyne_discrete(p, phases));
            const auto crb = sl::crb_homodyne(p, n);
            for (std::size_t a = 0; a < 3; ++a) {
                worst = std::max(worst, rel(cov(a, a), crb[a]));
            }
        }
        detail("N=%zu: max relative deviation %.3e (limit %.0e)", n, worst, limit);
        ok = ok && worst < limit;
    }
    return ok;
}

// 6. Exact identities.
bool criterion_6() {
    double fit_err = 0.0, mom_err = 0.0, dhd_err = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            for (double phi : {0.0, 0.7, 1.6, 3.0}) {
                const sl::StateParams p{0.1 + 0.085 * i, 1.0 + 0.4 * j, phi};
                const auto scan = sl::expected_moment_scan(p, {});
                const auto f = sl::fit_estimate(scan).params;
                const auto m = sl::mom_step(scan, p).params;
                const sl::SymMatrix2 g = sl::state_covariance(p) + sl::SymMatrix2::identity();
                const double l11 = std::sqrt(g.xx), l21 = g.xp / l11;
                const double l22 = std::sqrt(g.pp - l21 * l21), r2 = std::sqrt(2.0);
                sl::DhdBatch b;
                b.q1 = {r2 * l11, -r2 * l11, 0.0, 0.0};
                b.p2 = {r2 * l21, -r2 * l21, r2 * l22, -r2 * l22};
                const auto d = sl::dhd_estimate(b).params;
                auto err = [&](const sl::StateParams &e) {
                    return std::max({std::abs(e.s - p.s), std::abs(e.kappa - p.kappa),
                                     sl::circular_distance(e.phi_s, p.phi_s)});
                };
                fit_err = std::max(fit_err, err(f));
                mom_err = std::max(mom_err, err(m));
                dhd_err = std::max(dhd_err, err(d));
            }
        }
    }
    detail("fit inversion on expected moments: max error %.2e", fit_err);
    detail("moment step fixed point at the prior: max error %.2e", mom_err);
    detail("DHD eigen round trip: max error %.2e", dhd_err);

    sl::RandomStream rng(kSeed, sl::StreamDomain::Drift, 0, 0xACCE);
    double min_eig = 1e300;
    for (int k = 0; k < 20; ++k) {
        const sl::StateParams p{0.05 + 0.9 * rng.uniform(), 1.0 + 4.0 * rng.uniform(),
                                std::numbers::pi * rng.uniform()};
        const auto q = sl::qfi_matrix(p);
        const auto f = sl::fisher_homodyne_per_sample(p);
        // The kappa entry of the QFI is finite for kappa > 1.
        const auto e = (q - f).eigenvalues();
        const double scale = std::max({q(0, 0), q(1, 1), q(2, 2)});
        min_eig = std::min(min_eig, e[0] / scale);
    }
    detail("QFI - per-sample FI at 20 random states: min relative eigenvalue %.3e", min_eig);
    return fit_err < 1e-10 && mom_err < 1e-10 && dhd_err < 1e-10 && min_eig > -1e-10;
}

// 7. Angle tracking under drift.
bool criterion_7() {
    const sl::StateParams base = sl::empirical_family(0.2089, 1.0);
    sl::DriftModel drift; // mean-reverting, 5 ms, 500 us steps
    const double duration = 0.3;
    const int tracks = 20;
    std::vector<std::vector<double>> series;
    for (int k = 0; k < tracks; ++k) {
        const auto t = sl::track_angle(drift, base, {}, duration, sl::derive_seed(kSeed, 700 + k));
        series.push_back(t.unwrapped_estimates());
    }
    const double tau = sl::estimate_correlation_time(series, drift.step_interval);
    const bool tau_ok = std::abs(tau - drift.correlation_time) <= 0.3 * drift.correlation_time;
    detail("correlation time from %d tracks of %zu scans: %.3f ms (truth 5 ms, +-30%%)", tracks,
           series.front().size(), tau * 1e3);

    sl::DriftModel still = drift;
    still.amplitude = 0.0;
    std::vector<double> errors;
    for (int k = 0; k < 5; ++k) {
        const auto t = sl::track_angle(still, base, {}, duration, sl::derive_seed(kSeed, 800 + k));
        for (const auto &p : t.points) {
            errors.push_back(p.phi_est);
        }
    }
    const double spread = std::sqrt(sl::circular_stats(errors).variance);
    const double bound = std::sqrt(sl::crb_homodyne(base, kScanSamples).var_phi);
    const double ratio = spread / bound;
    const bool scatter_ok = in_window(ratio);
    detail("static scatter over %zu scans: %.4f rad, bound %.4f rad, ratio %.3f [0.85, 1.2]",
           errors.size(), spread, bound, ratio);
    return tau_ok && scatter_ok;
}

// 8. Worker count does not change benchmark output.
bool criterion_8() {
    auto bench = [](const char *workers) {
        std::ostringstream out, err;
        const int code = sl::cli::run({"benchmark", "--workers", workers}, out, err);
        if (code != 0) {
            detail("benchmark --workers %s failed (%d): %s", workers, code, err.str().c_str());
        }
        return out.str();
    };
    const std::string one = bench("1");
    const std::string four = bench("4");
    detail("default benchmark: %zu bytes with 1 worker, %zu bytes with 4 workers", one.size(),
           four.size());
    return !one.empty() && one == four;
}

} // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<bool()>> criteria = {criterion_1, criterion_2, criterion_3,
                                                         criterion_4, criterion_5, criterion_6,
                                                         criterion_7, criterion_8};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1-8 ...]\n");
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
            selected.push_back(n);
        }
    }
    int failures = 0;
    for (const int n : selected) {
        std::printf("-- criterion %d\n", n);
        std::fflush(stdout);
        const bool pass = criteria[n - 1]();
        std::printf("criterion %d: %s\n", n, pass ? "PASS" : "FAIL");
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
