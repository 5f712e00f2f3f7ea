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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"
#include "squeezelab/bounds.hpp"
#include "squeezelab/estimators.hpp"
#include "squeezelab/io.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/simulator.hpp"

namespace squeezelab::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kTraceMagic = "squeezelab-trace";

json number(double v) {
    if (!std::isfinite(v)) {
        return format_report(v);
    }
    const std::string text = format_report(v);
    double r = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), r);
    return r;
}

std::string read_file(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError(path + ": cannot open for reading");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// "-" is the caller's stream; anything else a file opened for writing.
class Output {
  public:
    Output(const std::string &path, std::ostream &out, bool binary = false) : path_(path) {
        if (path == "-") {
            os_ = &out;
        } else {
            file_ = std::make_unique<std::ofstream>(
                path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
            if (!*file_) {
                throw IoError(path + ": cannot open for writing");
            }
            os_ = file_.get();
        }
    }
    std::ostream &stream() { return *os_; }
    void finish() {
        os_->flush();
        if (!*os_) {
            throw IoError(path_ + ": write failed");
        }
    }

  private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream *os_ = nullptr;
};

std::string comment_line(const RunConfig &c) {
    return "squeezelab " + c.command + " config=" + config_to_json(c);
}

double single_s(const RunConfig &c) {
    const auto values = parse_s_values(c.s);
    if (values.size() != 1) {
        throw ConfigError(c.command + ": --s must be a single value");
    }
    return values.front();
}

// ---- commands --------------------------------------------------------------

int cmd_bounds(RunConfig c, std::ostream &out) {
    if (c.s.empty()) {
        c.s = "0.2:1.0:0.05";
    }
    const auto mc = monte_carlo_config(c);
    std::vector<TheoryRow> rows;
    for (const double s : parse_s_values(c.s)) {
        rows.push_back(theory_row(state_for(c, s), mc));
    }
    Output o(c.output, out);
    write_theory_csv(o.stream(), rows, comment_line(c));
    o.finish();
    return kExitOk;
}

int cmd_simulate(RunConfig c, std::ostream &out) {
    if (c.s.empty()) {
        c.s = "0.2089";
    }
    const StateParams state = state_for(c, single_s(c));
    const ScanConfig scan = scan_config(c);
    if (c.kind == "scan") {
        const HomodyneScan data = sample_homodyne_scan(state, scan, c.seed);
        Output o(c.output, out);
        o.stream() << "# " << comment_line(c) << '\n';
        write_scan_csv(o.stream(), data);
        o.finish();
    } else if (c.kind == "dhd") {
        if (c.dhd_mu < 1) {
            throw ConfigError("dhd_mu must be >= 1");
        }
        const DhdBatch batch = sample_dhd(state, c.dhd_mu, c.seed);
        Output o(c.output, out);
        o.stream() << "# " << comment_line(c) << '\n';
        write_dhd_csv(o.stream(), batch);
        o.finish();
    } else if (c.kind == "trace") {
        if (c.output == "-") {
            throw ConfigError("simulate --kind trace needs --output <file>");
        }
        const TemporalMode mode = temporal_mode(c);
        const std::vector<StateParams> windows(scan.n_samples, state);
        const RawTrace trace =
            synthesize_trace(windows, mode, scan, trace_geometry(c), c.seed);
        {
            Output o(c.output, out, true);
            write_trace(o.stream(), trace);
            o.finish();
        }
        // The binary format has no room for the config; it goes next to it.
        Output side(c.output + ".json", out);
        json doc;
        doc["config"] = json::parse(config_to_json(c));
        doc["window_len"] = mode.window_len;
        doc["count"] = trace.samples.size();
        side.stream() << doc.dump(2) << '\n';
        side.finish();
    } else {
        throw ConfigError("kind must be scan, dhd or trace");
    }
    return kExitOk;
}

json estimate_json(const EstimateResult &r) {
    const auto &p = r.params;
    const SymMatrix3 &cov = r.predicted_cov;
    auto stderr_of = [](double v) { return v >= 0.0 ? std::sqrt(v) : std::nan(""); };
    const double c = 10.0 / std::log(10.0);
    const double var_db = c * c *
                          (cov(1, 1) / (p.kappa * p.kappa) + cov(0, 0) / (p.s * p.s) +
                           2.0 * cov(0, 1) / (p.s * p.kappa));
    json j;
    j["method"] = std::string(to_string(r.method));
    j["params"] = {{"s", number(p.s)}, {"kappa", number(p.kappa)}, {"phi_s", number(p.phi_s)}};
    j["std_error"] = {{"s", number(stderr_of(cov(0, 0)))},
                      {"kappa", number(stderr_of(cov(1, 1)))},
                      {"phi_s", number(stderr_of(cov(2, 2)))}};
    j["squeezing_db"] = number(squeezing_db(p));
    j["squeezing_db_error"] = number(stderr_of(var_db));
    j["purity"] = number(p.purity());
    j["physical"] = r.physical;
    j["flags"] = r.flags.names();
    j["iterations"] = r.iterations;
    if (r.prior_used) {
        j["prior"] = {{"s", number(r.prior_used->s)},
                      {"kappa", number(r.prior_used->kappa)},
                      {"phi_s", number(r.prior_used->phi_s)}};
    } else {
        j["prior"] = nullptr;
    }
    return j;
}

int cmd_estimate(RunConfig c, std::ostream &out) {
    if (c.input.empty()) {
        throw ConfigError("estimate needs --input <file>");
    }
    const std::string content = read_file(c.input);
    std::istringstream is(content);

    std::string kind;
    std::vector<EstimateResult> results;
    std::size_t count = 0;
    if (content.compare(0, kTraceMagic.size(), kTraceMagic) == 0) {
        kind = "trace";
        if (c.methods.empty()) {
            c.methods = "fit,mom";
        }
        const RawTrace trace = read_trace(is, c.input);
        // Honour the file's own rate and length.
        c.sample_rate_hz = trace.sample_rate_hz;
        TemporalMode mode = temporal_mode(c);
        mode.window_len = trace.samples.size() / c.n_samples;
        if (mode.window_len == 0) {
            throw ConfigMismatch(c.input + ": trace has fewer samples than n_samples windows");
        }
        const HomodyneScan scan = scan_from_trace(trace, mode, scan_config(c));
        count = scan.size();
        for (const Method m : parse_methods(c.methods)) {
            if (m == Method::DHD) {
                throw ConfigError("method dhd needs double-homodyne input");
            }
            results.push_back(m == Method::Fit ? fit_estimate(scan)
                                               : mom_estimate(scan, {}, mom_options(c)));
        }
    } else {
        switch (sniff_csv(is)) {
        case CsvKind::Scan: {
            kind = "scan";
            if (c.methods.empty()) {
                c.methods = "fit,mom";
            }
            const HomodyneScan scan = read_scan_csv(is, c.input);
            count = scan.size();
            for (const Method m : parse_methods(c.methods)) {
                if (m == Method::DHD) {
                    throw ConfigError("method dhd needs double-homodyne input");
                }
                results.push_back(m == Method::Fit ? fit_estimate(scan)
                                                   : mom_estimate(scan, {}, mom_options(c)));
            }
            break;
        }
        case CsvKind::Dhd: {
            kind = "dhd";
            if (c.methods.empty()) {
                c.methods = "dhd";
            }
            const DhdBatch batch = read_dhd_csv(is, c.input);
            count = batch.mu();
            for (const Method m : parse_methods(c.methods)) {
                if (m != Method::DHD) {
                    throw ConfigError("double-homodyne input supports only method dhd");
                }
                results.push_back(dhd_estimate(batch));
            }
            break;
        }
        case CsvKind::Unknown:
            throw ParseError(c.input, 0,
                             "unrecognised input: expected a scan CSV (psi_rad,q), "
                             "a DHD CSV (q1,p2) or a squeezelab trace");
        }
    }

    json doc;
    doc["config"] = json::parse(config_to_json(c));
    doc["input"] = {{"path", c.input}, {"kind", kind}, {"samples", count}};
    json list = json::array();
    for (const auto &r : results) {
        list.push_back(estimate_json(r));
    }
    doc["estimates"] = std::move(list);
    Output o(c.output, out);
    o.stream() << doc.dump(2) << '\n';
    o.finish();
    return kExitOk;
}

int cmd_benchmark(RunConfig c, std::ostream &out) {
    if (c.s.empty()) {
        c.s = "0.21,0.3,0.4,0.5,0.7";
    }
    if (c.methods.empty()) {
        c.methods = "fit,mom,dhd";
    }
    if (c.format != "csv" && c.format != "json") {
        throw ConfigError("format must be csv or json");
    }
    if (c.trials < 2) {
        throw ConfigError("trials must be >= 2");
    }
    const auto mc = monte_carlo_config(c);
    const auto methods = parse_methods(c.methods);
    const auto s_values = parse_s_values(c.s);
    std::vector<StateParams> states;
    for (const double s : s_values) {
        states.push_back(state_for(c, s));
    }
    std::vector<TrialReport> reports;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::uint64_t point_seed = sweep_point_seed(c.seed, i);
        for (const Method m : methods) {
            reports.push_back(run_trials(states[i], m, mc, c.trials, point_seed));
        }
    }
    Output o(c.output, out);
    if (c.format == "csv") {
        write_report_csv(o.stream(), reports, comment_line(c));
    } else {
        write_report_json(o.stream(), reports, config_to_json(c));
    }
    o.finish();
    return kExitOk;
}

int cmd_track(RunConfig c, std::ostream &out) {
    if (c.s.empty()) {
        c.s = "0.2089";
    }
    const StateParams base = state_for(c, single_s(c));
    const DriftModel drift = drift_model(c);
    const ScanConfig scan = scan_config(c);
    if (!(c.duration_s >= 2.0 * drift.step_interval)) {
        throw ConfigError("duration_s must cover at least two scans");
    }
    const AngleTrack track = track_angle(drift, base, scan, c.duration_s, c.seed, mom_options(c));

    Output o(c.output, out);
    write_track_csv(o.stream(), track, comment_line(c));
    o.finish();

    std::string summary = c.summary;
    if (summary.empty() && c.output != "-") {
        summary = c.output + ".json";
    }
    if (!summary.empty()) {
        Output s(summary, out);
        write_track_json(s.stream(), track, scan.n_samples, config_to_json(c));
        s.finish();
    }
    return kExitOk;
}

// ---- option wiring ---------------------------------------------------------

void add_state(CLI::App *app, RunConfig &c) {
    app->add_option("--s", c.s, "s value, list a,b,c or range a:b[:step]");
    app->add_option("--kappa", c.kappa, "fixed kappa (default: family kappa = 1/sqrt(s))");
    app->add_option("--phi-s", c.phi_s, "squeezing angle [rad]");
    app->add_option("--family", c.family, "kappa-inv-sqrt-s, or fixed (with --kappa)");
}

void add_scan(CLI::App *app, RunConfig &c) {
    app->add_option("--n-samples", c.n_samples, "quadrature samples per scan");
    app->add_option("--phase-periods", c.phase_periods, "scan covers [0, n pi)");
    app->add_option("--phase-sampling", c.phase_sampling, "equispaced or uniform");
}

void add_mom(CLI::App *app, RunConfig &c) {
    app->add_option("--mom-max-iter", c.mom_max_iter, "iteration cap");
    app->add_option("--mom-tol", c.mom_tol, "relative convergence tolerance");
    app->add_option("--mom-solver", c.mom_solver, "closed-form or linear-system");
}

void add_trace(CLI::App *app, RunConfig &c) {
    app->add_option("--mode-fwhm-hz", c.mode_fwhm_hz, "temporal mode spectral FWHM");
    app->add_option("--sample-rate-hz", c.sample_rate_hz, "digitizer rate");
    app->add_option("--scan-duration-s", c.scan_duration_s, "duration of one scan");
}

void add_common(CLI::App *app, RunConfig &c, std::string &config_path) {
    app->add_option("--config", config_path, "JSON file with flat config keys");
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("-o,--output", c.output, "output path, - for stdout");
}

std::string prescan_config(const std::vector<std::string> &args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return {};
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        // Precedence: command line > config file > SQUEEZELAB_SEED > built-in defaults.
        RunConfig c = default_config();
        const std::string file = prescan_config(args);
        if (!file.empty()) {
            c = merge_config_json(c, read_file(file), file);
        }

        CLI::App app{"squeezelab: squeezed-state parameter estimation toolkit", "squeezelab"};
        app.require_subcommand(1);
        std::string config_path;

        auto *bounds = app.add_subcommand("bounds", "theoretical bounds over an s grid (CSV)");
        add_state(bounds, c);
        bounds->add_option("--n-samples", c.n_samples, "homodyne samples per scan");
        bounds->add_option("--dhd-mu", c.dhd_mu, "double-homodyne repetitions");
        add_common(bounds, c, config_path);

        auto *simulate = app.add_subcommand("simulate", "write synthetic data");
        add_state(simulate, c);
        add_scan(simulate, c);
        add_trace(simulate, c);
        simulate->add_option("--kind", c.kind, "scan, dhd or trace");
        simulate->add_option("--dhd-mu", c.dhd_mu, "double-homodyne repetitions");
        add_common(simulate, c, config_path);

        auto *estimate = app.add_subcommand("estimate", "estimate (s, kappa, phi_s) from a file");
        estimate->add_option("input,--input", c.input, "scan CSV, DHD CSV or trace file");
        estimate->add_option("--method,--methods", c.methods, "comma list of fit, mom, dhd");
        add_scan(estimate, c);
        add_mom(estimate, c);
        add_trace(estimate, c);
        add_common(estimate, c, config_path);

        auto *benchmark = app.add_subcommand("benchmark", "Monte Carlo estimator statistics");
        add_state(benchmark, c);
        add_scan(benchmark, c);
        add_mom(benchmark, c);
        benchmark->add_option("--method,--methods", c.methods, "comma list of fit, mom, dhd");
        benchmark->add_option("--mom-prior", c.mom_prior, "fit or truth");
        benchmark->add_option("--trials", c.trials, "trials per point");
        benchmark->add_option("--dhd-mu", c.dhd_mu, "double-homodyne repetitions");
        benchmark->add_option("--nonphysical", c.nonphysical, "include or exclude");
        benchmark->add_option("--workers", c.workers, "threads, 0 = all cores");
        benchmark->add_option("--format", c.format, "csv or json");
        add_common(benchmark, c, config_path);

        auto *track = app.add_subcommand("track", "track the squeezing angle under drift");
        add_state(track, c);
        add_scan(track, c);
        add_mom(track, c);
        track->add_option("--drift-kind", c.drift_kind, "mean-reverting or random-walk");
        track->add_option("--drift-tau-s", c.drift_tau_s, "drift correlation time");
        track->add_option("--drift-step-s", c.drift_step_s, "scan period");
        track->add_option("--drift-amplitude-rad", c.drift_amplitude_rad, "drift amplitude");
        track->add_option("--duration-s", c.duration_s, "total tracked time");
        track->add_option("--summary", c.summary, "JSON summary path");
        add_common(track, c, config_path);

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitConfig;
        }

        const auto *sub = app.get_subcommands().front();
        c.command = sub->get_name();
        if (c.command == "bounds") {
            return cmd_bounds(c, out);
        }
        if (c.command == "simulate") {
            return cmd_simulate(c, out);
        }
        if (c.command == "estimate") {
            return cmd_estimate(c, out);
        }
        if (c.command == "benchmark") {
            return cmd_benchmark(c, out);
        }
        return cmd_track(c, out);
    } catch (const ConfigError &e) {
        err << "squeezelab: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigMismatch &e) {
        err << "squeezelab: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        err << "squeezelab: invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError &e) {
        err << "squeezelab: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError &e) {
        err << "squeezelab: parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception &e) {
        err << "squeezelab: error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace squeezelab::cli
