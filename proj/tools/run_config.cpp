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

#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>

#include <json.hpp>

#include "squeezelab/io.hpp"

namespace squeezelab::cli {

namespace {

using json = nlohmann::ordered_json;

struct Field {
    const char *key;
    std::function<void(RunConfig &, const json &)> set;
    std::function<json(const RunConfig &)> get;
};

template <typename T>
T checked(const json &v, const char *key) {
    if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) {
            throw ConfigError(std::string("config key '") + key + "' must be a string");
        }
        return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) {
            throw ConfigError(std::string("config key '") + key + "' must be a number");
        }
        return v.get<T>();
    } else {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<std::int64_t>() < 0)) {
            throw ConfigError(std::string("config key '") + key +
                              "' must be a non-negative integer");
        }
        const auto u = v.get<std::uint64_t>();
        if (u > std::numeric_limits<T>::max()) {
            throw ConfigError(std::string("config key '") + key + "' is out of range");
        }
        return static_cast<T>(u);
    }
}

template <typename T>
Field field(const char *key, T RunConfig::*member) {
    return {key,
            [key, member](RunConfig &c, const json &v) { c.*member = checked<T>(v, key); },
            [member](const RunConfig &c) { return json(c.*member); }};
}

const std::vector<Field> &fields() {
    static const std::vector<Field> table = {
        field("command", &RunConfig::command),
        field("s", &RunConfig::s),
        field("kappa", &RunConfig::kappa),
        field("phi_s", &RunConfig::phi_s),
        field("family", &RunConfig::family),
        field("methods", &RunConfig::methods),
        field("mom_max_iter", &RunConfig::mom_max_iter),
        field("mom_tol", &RunConfig::mom_tol),
        field("mom_solver", &RunConfig::mom_solver),
        field("mom_prior", &RunConfig::mom_prior),
        field("n_samples", &RunConfig::n_samples),
        field("phase_periods", &RunConfig::phase_periods),
        field("phase_sampling", &RunConfig::phase_sampling),
        field("dhd_mu", &RunConfig::dhd_mu),
        field("trials", &RunConfig::trials),
        field("seed", &RunConfig::seed),
        field("nonphysical", &RunConfig::nonphysical),
        field("workers", &RunConfig::workers),
        field("kind", &RunConfig::kind),
        field("mode_fwhm_hz", &RunConfig::mode_fwhm_hz),
        field("sample_rate_hz", &RunConfig::sample_rate_hz),
        field("scan_duration_s", &RunConfig::scan_duration_s),
        field("drift_kind", &RunConfig::drift_kind),
        field("drift_tau_s", &RunConfig::drift_tau_s),
        field("drift_step_s", &RunConfig::drift_step_s),
        field("drift_amplitude_rad", &RunConfig::drift_amplitude_rad),
        field("duration_s", &RunConfig::duration_s),
        field("input", &RunConfig::input),
        field("output", &RunConfig::output),
        field("summary", &RunConfig::summary),
        field("format", &RunConfig::format),
    };
    return table;
}

double parse_number(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(v)) {
        throw ConfigError(std::string(what) + ": not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

} // namespace

RunConfig default_config() {
    RunConfig c;
    if (const char *env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
        const std::string_view text(env);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ConfigError(std::string(kSeedEnv) + ": not an unsigned integer: '" +
                              std::string(text) + "'");
        }
        c.seed = seed;
    }
    return c;
}

RunConfig merge_config_json(RunConfig base, std::string_view json_text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string(source) + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(std::string(source) + ": config must be a JSON object");
    }
    for (const auto &[key, value] : doc.items()) {
        bool known = false;
        for (const auto &f : fields()) {
            if (key == f.key) {
                try {
                    f.set(base, value);
                } catch (const ConfigError &e) {
                    throw ConfigError(std::string(source) + ": " + e.what());
                }
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(std::string(source) + ": unknown config key '" + key + "'");
        }
    }
    return base;
}

std::string config_to_json(const RunConfig &config) {
    json doc = json::object();
    for (const auto &f : fields()) {
        if (std::string_view(f.key) != "workers") {
            doc[f.key] = f.get(config);
        }
    }
    return doc.dump();
}

std::vector<double> parse_s_values(std::string_view spec) {
    if (spec.find(':') != std::string_view::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw ConfigError("s: range must be a:b or a:b:step");
        }
        const double a = parse_number(parts[0], "s");
        const double b = parse_number(parts[1], "s");
        const double step = parts.size() == 3 ? parse_number(parts[2], "s") : 0.05;
        if (!(step > 0.0) || b < a) {
            throw ConfigError("s: range needs step > 0 and b >= a");
        }
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            // Snap to 12 digits so 0.2 + 3 * 0.05 prints as 0.35.
            out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto part : split(spec, ',')) {
        out.push_back(parse_number(part, "s"));
    }
    return out;
}

std::vector<Method> parse_methods(std::string_view list) {
    std::vector<Method> out;
    for (const auto part : split(list, ',')) {
        try {
            out.push_back(parse_method(part));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("methods: ") + e.what());
        }
    }
    return out;
}

StateParams state_for(const RunConfig &config, double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw ConfigError("s must lie in (0, 1], got " + format_report(s));
    }
    double kappa = config.kappa;
    if (!(kappa > 0.0)) {
        if (config.family != "kappa-inv-sqrt-s") {
            throw ConfigError("family '" + config.family +
                              "' needs an explicit kappa (only kappa-inv-sqrt-s is derived)");
        }
        kappa = 1.0 / std::sqrt(s);
    }
    if (!(kappa >= 1.0)) {
        throw ConfigError("kappa must be >= 1, got " + format_report(kappa));
    }
    try {
        return make_state(s, kappa, config.phi_s);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

ScanConfig scan_config(const RunConfig &config) {
    ScanConfig scan;
    scan.n_samples = config.n_samples;
    scan.phase_periods = config.phase_periods;
    if (config.phase_sampling == "equispaced") {
        scan.sampling = PhaseSampling::Equispaced;
    } else if (config.phase_sampling == "uniform") {
        scan.sampling = PhaseSampling::Uniform;
    } else {
        throw ConfigError("phase_sampling must be equispaced or uniform");
    }
    try {
        scan.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return scan;
}

MomOptions mom_options(const RunConfig &config) {
    MomOptions o;
    o.max_iter = config.mom_max_iter;
    o.tol = config.mom_tol;
    if (config.mom_solver == "closed-form") {
        o.solver = MomSolver::ClosedForm;
    } else if (config.mom_solver == "linear-system") {
        o.solver = MomSolver::LinearSystem;
    } else {
        throw ConfigError("mom_solver must be closed-form or linear-system");
    }
    if (o.max_iter == 0 || !(o.tol > 0.0)) {
        throw ConfigError("mom_max_iter must be >= 1 and mom_tol > 0");
    }
    return o;
}

MonteCarloConfig monte_carlo_config(const RunConfig &config) {
    MonteCarloConfig mc;
    mc.scan = scan_config(config);
    mc.dhd_mu = config.dhd_mu;
    mc.mom = mom_options(config);
    if (config.mom_prior == "fit") {
        mc.prior = PriorPolicy::FitSeed;
    } else if (config.mom_prior == "truth") {
        mc.prior = PriorPolicy::Truth;
    } else {
        throw ConfigError("mom_prior must be fit or truth");
    }
    if (config.nonphysical == "include") {
        mc.nonphysical = NonPhysicalPolicy::Include;
    } else if (config.nonphysical == "exclude") {
        mc.nonphysical = NonPhysicalPolicy::Exclude;
    } else {
        throw ConfigError("nonphysical must be include or exclude");
    }
    mc.workers = config.workers;
    try {
        mc.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return mc;
}

DriftModel drift_model(const RunConfig &config) {
    DriftModel d;
    if (config.drift_kind == "mean-reverting") {
        d.kind = DriftKind::MeanReverting;
    } else if (config.drift_kind == "random-walk") {
        d.kind = DriftKind::RandomWalk;
    } else {
        throw ConfigError("drift_kind must be mean-reverting or random-walk");
    }
    d.correlation_time = config.drift_tau_s;
    d.step_interval = config.drift_step_s;
    d.amplitude = config.drift_amplitude_rad;
    try {
        d.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return d;
}

TraceGeometry trace_geometry(const RunConfig &config) {
    if (!(config.scan_duration_s > 0.0) || !(config.sample_rate_hz > 0.0)) {
        throw ConfigError("scan_duration_s and sample_rate_hz must be > 0");
    }
    return {config.scan_duration_s, config.sample_rate_hz};
}

TemporalMode temporal_mode(const RunConfig &config) {
    TemporalMode m;
    m.fwhm_hz = config.mode_fwhm_hz;
    m.sample_rate_hz = config.sample_rate_hz;
    m.window_len = trace_geometry(config).window_len(config.n_samples);
    try {
        m.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return m;
}

} // namespace squeezelab::cli
