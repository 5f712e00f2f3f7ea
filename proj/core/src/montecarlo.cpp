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

#include "squeezelab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "squeezelab/io.hpp"
#include "squeezelab/random.hpp"

namespace squeezelab {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sum that does not depend on the order of `values` (they are sorted first),
// with Neumaier compensation.
double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    double comp = 0.0;
    for (const double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double stable_mean(const std::vector<double> &values) {
    return stable_sum(values) / static_cast<double>(values.size());
}

struct Moments {
    StateParams mean;
    SymMatrix3 cov;
};

SymMatrix3 nan_matrix() {
    SymMatrix3 m;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
            m.set(i, j, kNaN);
        }
    }
    return m;
}

// Mean and covariance of (s, kappa, phi). The angle enters through wrapped
// deviations from the circular mean; its variance is then replaced by the
// directional one and the cross terms rescaled to match, which keeps the
// matrix positive semi-definite.
Moments moments_of(const std::vector<const TrialEstimate *> &subset) {
    Moments m;
    const std::size_t n = subset.size();
    if (n == 0) {
        m.mean = {kNaN, kNaN, kNaN};
        m.cov = nan_matrix();
        return m;
    }
    std::vector<double> s(n), k(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = subset[i]->params.s;
        k[i] = subset[i]->params.kappa;
        phi[i] = subset[i]->params.phi_s;
    }
    const CircularStats circ = circular_stats(phi);
    m.mean = {stable_mean(s), stable_mean(k), circ.mean};
    if (n < 2) {
        m.cov = nan_matrix();
        return m;
    }

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = angle_difference(phi[i], circ.mean);
    }
    const double d_mean = stable_mean(d);
    const std::array<const std::vector<double> *, 3> cols = {&s, &k, &d};
    const std::array<double, 3> means = {m.mean.s, m.mean.kappa, d_mean};
    const double denom = static_cast<double>(n - 1);
    std::vector<double> prod(n);
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a; b < 3; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                prod[i] = ((*cols[a])[i] - means[a]) * ((*cols[b])[i] - means[b]);
            }
            m.cov.set(a, b, stable_sum(prod) / denom);
        }
    }

    const double linear = m.cov(2, 2);
    // Directional variance uses the 1/n resultant; bring it to the same
    // n - 1 normalisation as the rest of the matrix.
    const double directional = circ.variance * static_cast<double>(n) / denom;
    if (linear > 0.0 && std::isfinite(directional)) {
        const double f = std::sqrt(directional / linear);
        m.cov.set(0, 2, m.cov(0, 2) * f);
        m.cov.set(1, 2, m.cov(1, 2) * f);
        m.cov.set(2, 2, directional);
    }
    return m;
}

double ratio(double num, double den) {
    if (std::isinf(den)) {
        return std::isinf(num) ? kNaN : 0.0;
    }
    return num / den;
}

// Rounded to 12 significant digits; non-finite values become strings.
json number(double v) {
    if (!std::isfinite(v)) {
        return format_report(v);
    }
    const std::string text = format_report(v);
    double r = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), r);
    return r;
}

json params_json(const StateParams &p) {
    return json{{"s", number(p.s)}, {"kappa", number(p.kappa)}, {"phi_s", number(p.phi_s)}};
}

json triple_json(const std::array<double, 3> &v) {
    return json{{"s", number(v[0])}, {"kappa", number(v[1])}, {"phi_s", number(v[2])}};
}

json bound_json(const BoundVector &b) {
    return json{{"var_s", number(b.var_s)},
                {"var_kappa", number(b.var_kappa)},
                {"var_phi", number(b.var_phi)},
                {"n_samples", b.n_samples}};
}

json matrix_json(const SymMatrix3 &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        rows.push_back(json::array({number(m(i, 0)), number(m(i, 1)), number(m(i, 2))}));
    }
    return rows;
}

json config_value(std::string_view config_json) {
    if (config_json.empty()) {
        return nullptr;
    }
    return json::parse(config_json);
}

void write_comment(std::ostream &os, std::string_view comment) {
    if (!comment.empty()) {
        os << "# " << comment << '\n';
    }
}

constexpr std::array<const char *, 3> kParamNames = {"s", "kappa", "phi_s"};

} // namespace

void MonteCarloConfig::validate() const {
    scan.validate();
    if (dhd_mu < 3) {
        throw std::invalid_argument("MonteCarloConfig: dhd_mu must be >= 3");
    }
    if (mom.max_iter == 0) {
        throw std::invalid_argument("MonteCarloConfig: mom max_iter must be >= 1");
    }
    if (!(mom.tol > 0.0)) {
        throw std::invalid_argument("MonteCarloConfig: mom tol must be > 0");
    }
}

EstimateResult run_single_trial(const StateParams &truth, Method method,
                                const MonteCarloConfig &config, std::uint64_t seed,
                                std::uint32_t trial) {
    switch (method) {
    case Method::Fit:
        return fit_estimate(sample_homodyne_scan(truth, config.scan, seed, trial));
    case Method::MoM: {
        const HomodyneScan scan = sample_homodyne_scan(truth, config.scan, seed, trial);
        std::optional<StateParams> prior;
        if (config.prior == PriorPolicy::Truth) {
            prior = truth;
        }
        return mom_estimate(scan, prior, config.mom);
    }
    case Method::DHD:
        return dhd_estimate(sample_dhd(truth, config.dhd_mu, seed, trial));
    }
    throw std::invalid_argument("run_single_trial: unknown method");
}

CircularStats circular_stats(std::span<const double> angles) {
    CircularStats out;
    if (angles.empty()) {
        out.mean = out.variance = out.resultant = kNaN;
        return out;
    }
    std::vector<double> c(angles.size()), sn(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        c[i] = std::cos(2.0 * angles[i]);
        sn[i] = std::sin(2.0 * angles[i]);
    }
    const double n = static_cast<double>(angles.size());
    const double mc = stable_sum(std::move(c)) / n;
    const double ms = stable_sum(std::move(sn)) / n;
    out.resultant = std::min(1.0, std::hypot(mc, ms));
    out.mean = canonical_angle(0.5 * std::atan2(ms, mc));
    // For a wrapped normal on 2 phi, R = exp(-var(2 phi) / 2).
    out.variance = out.resultant > 0.0 ? -0.5 * std::log(out.resultant)
                                       : std::numeric_limits<double>::infinity();
    return out;
}

TheoryRow theory_row(const StateParams &params, const MonteCarloConfig &config) {
    TheoryRow row;
    row.params = params;
    row.crb_homodyne = crb_homodyne(params, config.scan.n_samples);
    row.fit_prediction = fit_variance_prediction(params, config.scan.n_samples);
    row.crb_dhd = crb_dhd(params, config.dhd_mu);
    row.qcrb = qcrb(params, config.scan.n_samples);
    return row;
}

std::vector<TheoryRow> theory_table(std::span<const double> s_values,
                                    const MonteCarloConfig &config, double fixed_kappa) {
    std::vector<TheoryRow> rows;
    rows.reserve(s_values.size());
    for (const double s : s_values) {
        const StateParams p = fixed_kappa > 0.0 ? make_state(s, fixed_kappa) : empirical_family(s);
        rows.push_back(theory_row(p, config));
    }
    return rows;
}

TrialReport aggregate_trials(const StateParams &truth, Method method,
                             std::span<const TrialEstimate> estimates,
                             const MonteCarloConfig &config) {
    if (estimates.size() < 2) {
        throw std::invalid_argument("aggregate_trials: need at least 2 trials");
    }
    TrialReport r;
    r.truth = truth;
    r.method = method;
    r.trials = estimates.size();

    std::vector<const TrialEstimate *> all;
    std::vector<const TrialEstimate *> physical;
    all.reserve(estimates.size());
    unsigned max_iter = method == Method::MoM ? config.mom.max_iter : 0;
    for (const auto &e : estimates) {
        all.push_back(&e);
        if (e.physical) {
            physical.push_back(&e);
        }
        max_iter = std::max(max_iter, e.iterations);
    }
    r.physical_trials = physical.size();
    r.nonphysical_rate =
        static_cast<double>(r.trials - r.physical_trials) / static_cast<double>(r.trials);

    const Moments m_all = moments_of(all);
    const Moments m_phys = moments_of(physical);
    r.empirical_cov_all = m_all.cov;
    r.empirical_cov_physical = m_phys.cov;
    const bool include = config.nonphysical == NonPhysicalPolicy::Include;
    const Moments &chosen = include ? m_all : m_phys;
    const std::size_t n_used = include ? all.size() : physical.size();
    r.empirical_cov = chosen.cov;
    r.mean = chosen.mean;
    r.bias = {chosen.mean.s - truth.s, chosen.mean.kappa - truth.kappa,
              angle_difference(chosen.mean.phi_s, truth.phi_s)};

    r.theory = theory_row(truth, config);
    switch (method) {
    case Method::Fit:
        r.bound = r.theory.crb_homodyne;
        r.prediction = r.theory.fit_prediction;
        break;
    case Method::MoM:
        r.bound = r.theory.crb_homodyne;
        r.prediction = r.theory.crb_homodyne;
        break;
    case Method::DHD:
        r.bound = r.theory.crb_dhd;
        r.prediction = r.theory.crb_dhd;
        break;
    }

    const auto var = r.empirical_cov.diag();
    const double se_factor =
        n_used >= 2 ? std::sqrt(2.0 / static_cast<double>(n_used - 1)) : kNaN;
    for (std::size_t i = 0; i < 3; ++i) {
        r.variance_se[i] = se_factor * var[i];
        r.saturation_ratio[i] = ratio(var[i], r.bound[i]);
        r.prediction_ratio[i] = ratio(var[i], r.prediction[i]);
    }

    std::vector<double> db;
    db.reserve(physical.size());
    for (const auto *e : physical) {
        db.push_back(squeezing_db(e->params));
    }
    if (db.empty()) {
        r.squeezing_db_mean = r.squeezing_db_std = kNaN;
    } else {
        r.squeezing_db_mean = stable_mean(db);
        if (db.size() >= 2) {
            std::vector<double> sq(db.size());
            for (std::size_t i = 0; i < db.size(); ++i) {
                sq[i] = (db[i] - r.squeezing_db_mean) * (db[i] - r.squeezing_db_mean);
            }
            r.squeezing_db_std =
                std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(db.size() - 1));
        } else {
            r.squeezing_db_std = kNaN;
        }
    }

    r.iteration_histogram.assign(max_iter + 1, 0);
    for (const auto &e : estimates) {
        ++r.iteration_histogram[e.iterations];
    }
    if (config.keep_estimates) {
        r.estimates.assign(estimates.begin(), estimates.end());
    }
    return r;
}

TrialReport run_trials(const StateParams &truth, Method method, const MonteCarloConfig &config,
                       std::size_t trials, std::uint64_t seed) {
    config.validate();
    require_physical(truth, "run_trials");
    if (trials < 2) {
        throw std::invalid_argument("run_trials: trials must be >= 2");
    }
    if (trials > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("run_trials: too many trials");
    }

    std::vector<TrialEstimate> estimates(trials);
    unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
    workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, trials));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= trials) {
                return;
            }
            try {
                const EstimateResult e =
                    run_single_trial(truth, method, config, seed, static_cast<std::uint32_t>(i));
                estimates[i] = {e.params, e.physical, e.iterations};
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(trials);
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return aggregate_trials(truth, method, estimates, config);
}

std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t point_index) {
    return derive_seed(seed, 0x5EE9'0000ull + point_index);
}

std::vector<TrialReport> sweep_family(std::span<const double> s_values,
                                      std::span<const Method> methods,
                                      const MonteCarloConfig &config, std::size_t trials,
                                      std::uint64_t seed) {
    std::vector<TrialReport> out;
    out.reserve(s_values.size() * methods.size());
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const StateParams truth = empirical_family(s_values[i]);
        const std::uint64_t point_seed = sweep_point_seed(seed, i);
        for (const Method m : methods) {
            out.push_back(run_trials(truth, m, config, trials, point_seed));
        }
    }
    return out;
}

std::vector<double> AngleTrack::unwrapped_estimates() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        if (out.empty()) {
            out.push_back(p.phi_est);
        } else {
            out.push_back(out.back() + angle_difference(p.phi_est, out.back()));
        }
    }
    return out;
}

double AngleTrack::rms_error() const {
    if (points.empty()) {
        return kNaN;
    }
    std::vector<double> sq;
    sq.reserve(points.size());
    for (const auto &p : points) {
        const double d = angle_difference(p.phi_est, p.phi_true);
        sq.push_back(d * d);
    }
    return std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(points.size()));
}

double AngleTrack::estimate_spread() const {
    std::vector<double> phi;
    phi.reserve(points.size());
    for (const auto &p : points) {
        phi.push_back(p.phi_est);
    }
    return std::sqrt(circular_stats(phi).variance);
}

AngleTrack track_angle(const DriftModel &drift, const StateParams &base, const ScanConfig &scan,
                       double duration, std::uint64_t seed, const MomOptions &options) {
    drift.validate();
    scan.validate();
    require_physical(base, "track_angle");
    if (!(duration >= 2.0 * drift.step_interval * (1.0 - 1e-9))) {
        throw std::invalid_argument("track_angle: duration must cover at least 2 scans");
    }
    const PhaseTrajectory traj = simulate_phase_drift(drift, duration, seed);
    const auto scans = static_cast<std::size_t>(std::floor(duration / drift.step_interval + 1e-9));

    AngleTrack track;
    track.drift = drift;
    track.base = base;
    track.points.reserve(scans);
    std::optional<StateParams> prior;
    for (std::size_t k = 0; k < scans; ++k) {
        const double t = static_cast<double>(k) * drift.step_interval;
        StateParams truth = base;
        truth.phi_s = canonical_angle(base.phi_s + traj.offsets[std::min(k, traj.offsets.size() - 1)]);
        const HomodyneScan data =
            sample_homodyne_scan(truth, scan, seed, static_cast<std::uint32_t>(k));
        const EstimateResult e = mom_estimate(data, prior, options);

        AnglePoint p;
        p.t = t;
        p.phi_true = truth.phi_s;
        p.phi_est = e.params.phi_s;
        const double v = e.predicted_cov(2, 2);
        p.half_width = v >= 0.0 ? std::sqrt(v) : kNaN;
        p.physical = e.physical;
        track.points.push_back(p);

        if (e.physical && e.params.s < 1.0) {
            prior = e.params;
        } else {
            prior.reset();
        }
    }
    return track;
}

double estimate_correlation_time(std::span<const std::vector<double>> series, double dt,
                                 double rho_floor) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("estimate_correlation_time: dt must be > 0");
    }
    std::size_t max_lag = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<double>> centred;
    for (const auto &x : series) {
        if (x.size() < 3) {
            continue;
        }
        const double m = stable_mean(x);
        std::vector<double> c(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            c[i] = x[i] - m;
        }
        centred.push_back(std::move(c));
        max_lag = std::min(max_lag, x.size() - 1);
    }
    if (centred.empty()) {
        return kNaN;
    }

    // Pooled autocovariance: per-series biased estimates, summed.
    auto autocov = [&](std::size_t lag) {
        double total = 0.0;
        for (const auto &c : centred) {
            std::vector<double> prod(c.size() - lag);
            for (std::size_t i = 0; i + lag < c.size(); ++i) {
                prod[i] = c[i] * c[i + lag];
            }
            total += stable_sum(std::move(prod)) / static_cast<double>(c.size());
        }
        return total;
    };
    const double c0 = autocov(0);
    if (!(c0 > 0.0)) {
        return kNaN;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        const double rho = autocov(lag) / c0;
        if (!(rho > rho_floor)) {
            break;
        }
        xs.push_back(static_cast<double>(lag) * dt);
        ys.push_back(std::log(rho));
    }
    if (xs.size() < 2) {
        return kNaN;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    return slope < 0.0 ? -1.0 / slope : kNaN;
}

void write_report_csv(std::ostream &os, std::span<const TrialReport> reports,
                      std::string_view comment) {
    write_comment(os, comment);
    os << "s,kappa,method,parameter,trials,empirical_var,empirical_var_se,"
          "empirical_var_physical,bias,nonphysical_rate,prediction,crb_homodyne,"
          "fit_prediction,crb_dhd,qcrb,saturation_ratio,prediction_ratio\n";
    for (const auto &r : reports) {
        const auto var = r.empirical_cov.diag();
        const auto var_phys = r.empirical_cov_physical.diag();
        for (std::size_t i = 0; i < 3; ++i) {
            os << format_report(r.truth.s) << ',' << format_report(r.truth.kappa) << ','
               << to_string(r.method) << ',' << kParamNames[i] << ',' << r.trials << ','
               << format_report(var[i]) << ',' << format_report(r.variance_se[i]) << ','
               << format_report(var_phys[i]) << ',' << format_report(r.bias[i]) << ','
               << format_report(r.nonphysical_rate) << ',' << format_report(r.prediction[i])
               << ',' << format_report(r.theory.crb_homodyne[i]) << ','
               << format_report(r.theory.fit_prediction[i]) << ','
               << format_report(r.theory.crb_dhd[i]) << ',' << format_report(r.theory.qcrb[i])
               << ',' << format_report(r.saturation_ratio[i]) << ','
               << format_report(r.prediction_ratio[i]) << '\n';
        }
    }
}

void write_theory_csv(std::ostream &os, std::span<const TheoryRow> rows,
                      std::string_view comment) {
    write_comment(os, comment);
    os << "s,kappa,phi_s";
    for (const char *curve : {"crb_homodyne", "fit_prediction", "crb_dhd", "qcrb"}) {
        for (const char *p : kParamNames) {
            os << ',' << curve << '_' << p;
        }
    }
    os << '\n';
    for (const auto &r : rows) {
        os << format_report(r.params.s) << ',' << format_report(r.params.kappa) << ','
           << format_report(r.params.phi_s);
        for (const BoundVector *b : {&r.crb_homodyne, &r.fit_prediction, &r.crb_dhd, &r.qcrb}) {
            for (std::size_t i = 0; i < 3; ++i) {
                os << ',' << format_report((*b)[i]);
            }
        }
        os << '\n';
    }
}

void write_report_json(std::ostream &os, std::span<const TrialReport> reports,
                       std::string_view config_json) {
    json doc;
    doc["config"] = config_value(config_json);
    json list = json::array();
    for (const auto &r : reports) {
        json j;
        j["truth"] = params_json(r.truth);
        j["method"] = std::string(to_string(r.method));
        j["trials"] = r.trials;
        j["physical_trials"] = r.physical_trials;
        j["nonphysical_rate"] = number(r.nonphysical_rate);
        j["mean"] = params_json(r.mean);
        j["bias"] = triple_json(r.bias);
        j["empirical_cov"] = matrix_json(r.empirical_cov);
        j["empirical_cov_all"] = matrix_json(r.empirical_cov_all);
        j["empirical_cov_physical"] = matrix_json(r.empirical_cov_physical);
        j["variance_se"] = triple_json(r.variance_se);
        j["bound"] = bound_json(r.bound);
        j["prediction"] = bound_json(r.prediction);
        j["saturation_ratio"] = triple_json(r.saturation_ratio);
        j["prediction_ratio"] = triple_json(r.prediction_ratio);
        j["theory"] = json{{"crb_homodyne", bound_json(r.theory.crb_homodyne)},
                           {"fit_prediction", bound_json(r.theory.fit_prediction)},
                           {"crb_dhd", bound_json(r.theory.crb_dhd)},
                           {"qcrb", bound_json(r.theory.qcrb)}};
        j["squeezing_db"] =
            json{{"mean", number(r.squeezing_db_mean)}, {"std", number(r.squeezing_db_std)}};
        j["iteration_histogram"] = r.iteration_histogram;
        if (!r.estimates.empty()) {
            json est = json::array();
            for (const auto &e : r.estimates) {
                est.push_back(json{{"s", number(e.params.s)},
                                   {"kappa", number(e.params.kappa)},
                                   {"phi_s", number(e.params.phi_s)},
                                   {"physical", e.physical},
                                   {"iterations", e.iterations}});
            }
            j["estimates"] = std::move(est);
        }
        list.push_back(std::move(j));
    }
    doc["reports"] = std::move(list);
    os << doc.dump(2) << '\n';
}

void write_track_csv(std::ostream &os, const AngleTrack &track, std::string_view comment) {
    write_comment(os, comment);
    os << "t_s,phi_true_rad,phi_est_rad,half_width_rad,physical\n";
    for (const auto &p : track.points) {
        os << format_report(p.t) << ',' << format_report(p.phi_true) << ','
           << format_report(p.phi_est) << ',' << format_report(p.half_width) << ','
           << (p.physical ? 1 : 0) << '\n';
    }
}

void write_track_json(std::ostream &os, const AngleTrack &track, std::size_t n_samples,
                      std::string_view config_json) {
    const std::vector<std::vector<double>> series = {track.unwrapped_estimates()};
    const double tau = estimate_correlation_time(series, track.drift.step_interval);
    const BoundVector crb = crb_homodyne(track.base, n_samples);
    std::size_t nonphysical = 0;
    for (const auto &p : track.points) {
        nonphysical += p.physical ? 0 : 1;
    }
    json doc;
    doc["config"] = config_value(config_json);
    doc["scans"] = track.points.size();
    doc["nonphysical_scans"] = nonphysical;
    doc["rms_error_rad"] = number(track.rms_error());
    doc["estimate_spread_rad"] = number(track.estimate_spread());
    doc["crb_phi_std_rad"] = number(std::sqrt(crb.var_phi));
    doc["correlation_time_s"] = number(tau);
    doc["drift"] = json{{"kind", track.drift.kind == DriftKind::MeanReverting ? "mean-reverting"
                                                                               : "random-walk"},
                        {"correlation_time_s", number(track.drift.correlation_time)},
                        {"step_interval_s", number(track.drift.step_interval)},
                        {"amplitude_rad", number(track.drift.amplitude)}};
    os << doc.dump(2) << '\n';
}

} // namespace squeezelab
