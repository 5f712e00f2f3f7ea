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

#include "squeezelab/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "squeezelab/bounds.hpp"

namespace squeezelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_samples(std::size_t n, std::size_t min_n, const char *what) {
    if (n < min_n) {
        throw std::invalid_argument(std::string(what) + ": need at least " +
                                    std::to_string(min_n) + " samples, got " + std::to_string(n));
    }
}

bool finite_params(const StateParams &p) {
    return std::isfinite(p.s) && std::isfinite(p.kappa) && std::isfinite(p.phi_s);
}

// Same variance curve, other labelling of the axes.
StateParams swap_axes(const StateParams &p) {
    return {1.0 / p.s, p.kappa, canonical_angle(p.phi_s + 0.5 * kPi)};
}

SymMatrix3 homodyne_covariance_at(const StateParams &est, const std::vector<double> &phases,
                                  EstimateFlags &flags) {
    if (!finite_params(est) || !(est.s > 0.0) || !(est.kappa > 0.0)) {
        flags.set(EstimateFlag::SingularInformation);
        return SymMatrix3::diagonal(kInfiniteBound, kInfiniteBound, kInfiniteBound);
    }
    const SymMatrix3 info = fisher_homodyne_discrete(est, phases);
    if (is_singular_information(info)) {
        flags.set(EstimateFlag::SingularInformation);
    }
    return covariance_from_information(info);
}

struct StepOutcome {
    StateParams params;
    bool guard_triggered = false; // an absolute value or square root saw a negative argument
    bool degenerate = false;
    bool singular_prior = false;
};

StepOutcome closed_form_step(const HomodyneScan &scan, const StateParams &prior) {
    const double n = static_cast<double>(scan.size());
    double y1 = 0.0, y2 = 0.0, y3 = 0.0;
    for (std::size_t j = 0; j < scan.size(); ++j) {
        const auto c = mom_weights(prior, scan.phases[j]);
        const double x = scan.samples[j] * scan.samples[j];
        y1 += c[0] * x;
        y2 += c[1] * x;
        y3 += c[2] * x;
    }
    y1 /= n;
    y2 /= n;
    y3 /= n;

    const double s0 = prior.s, k0 = prior.kappa;
    const double num = y1 * s0 * (1.0 + s0) + y2 * k0;
    const double den = y1 * (1.0 + s0) - y2 * k0;

    // At a consistent solution num / den = -s^2, so the absolute values
    // only signal trouble when num and den share a sign.
    StepOutcome out;
    out.guard_triggered = !(num * den < 0.0);
    out.degenerate = den == 0.0;
    out.params.s = std::sqrt(std::abs(num / den));
    out.params.kappa = 2.0 * k0 * std::sqrt(std::abs(num * den));
    if (s0 >= 1.0) {
        out.singular_prior = true;
        out.params.phi_s = prior.phi_s;
    } else if (y1 == 0.0) {
        out.degenerate = true;
        out.params.phi_s = prior.phi_s;
    } else {
        out.params.phi_s = canonical_angle(prior.phi_s - 0.5 * y3 / (y1 * (1.0 - s0 * s0)));
    }
    return out;
}

StepOutcome linear_system_step(const HomodyneScan &scan, const StateParams &prior) {
    if (prior.s >= 1.0) {
        // The angle equation vanishes identically; only the closed form copes.
        return closed_form_step(scan, prior);
    }
    const double n = static_cast<double>(scan.size());
    std::array<std::array<double, 3>, 3> g{};
    std::array<double, 3> y{};
    for (std::size_t j = 0; j < scan.size(); ++j) {
        const double psi = scan.phases[j];
        const auto c = mom_weights(prior, psi);
        const std::array<double, 3> basis{1.0, std::cos(2.0 * psi), std::sin(2.0 * psi)};
        const double x = scan.samples[j] * scan.samples[j];
        for (std::size_t a = 0; a < 3; ++a) {
            y[a] += c[a] * x / n;
            for (std::size_t m = 0; m < 3; ++m) {
                g[a][m] += c[a] * basis[m] / n;
            }
        }
    }
    StepOutcome out;
    const auto u = solve3(g, y);
    if (!u) {
        out.degenerate = true;
        out.guard_triggered = true;
        out.params = {kNaN, kNaN, prior.phi_s};
        return out;
    }
    // V = A + Bc cos 2psi + Bs sin 2psi with Bc = -R cos 2phi, Bs = -R sin 2phi.
    const double a = (*u)[0], bc = (*u)[1], bs = (*u)[2];
    const double r = std::hypot(bc, bs);
    const double lo = a - r, hi = a + r;
    out.guard_triggered = !(lo > 0.0);
    out.params.s = std::sqrt(std::abs(lo) / hi);
    out.params.kappa = std::sqrt(std::abs(lo) * hi);
    if (r == 0.0) {
        out.degenerate = true;
        out.params.phi_s = prior.phi_s;
    } else {
        out.params.phi_s = canonical_angle(0.5 * std::atan2(-bs, -bc));
    }
    return out;
}

StepOutcome run_step(const HomodyneScan &scan, const StateParams &prior, MomSolver solver) {
    return solver == MomSolver::ClosedForm ? closed_form_step(scan, prior)
                                           : linear_system_step(scan, prior);
}

void check_prior(const StateParams &prior, const char *what) {
    if (!finite_params(prior) || !(prior.s > 0.0) || !(prior.kappa > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": prior needs finite s > 0, kappa > 0");
    }
}

} // namespace

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Fit:
        return "fit";
    case Method::MoM:
        return "mom";
    case Method::DHD:
        return "dhd";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "fit") {
        return Method::Fit;
    }
    if (lower == "mom") {
        return Method::MoM;
    }
    if (lower == "dhd") {
        return Method::DHD;
    }
    throw std::invalid_argument("unknown estimation method '" + std::string(name) +
                                "' (expected fit, mom or dhd)");
}

std::vector<std::string> EstimateFlags::names() const {
    static constexpr std::pair<EstimateFlag, const char *> kNames[] = {
        {EstimateFlag::NonPhysical, "NonPhysical"},
        {EstimateFlag::Degenerate, "Degenerate"},
        {EstimateFlag::SingularPrior, "SingularPrior"},
        {EstimateFlag::NoConvergence, "NoConvergence"},
        {EstimateFlag::SeedFallback, "SeedFallback"},
        {EstimateFlag::SingularInformation, "SingularInformation"},
    };
    std::vector<std::string> out;
    for (const auto &[flag, name] : kNames) {
        if (test(flag)) {
            out.emplace_back(name);
        }
    }
    return out;
}

FourierComponents fourier_components(const HomodyneScan &scan) {
    scan.validate();
    const double n = static_cast<double>(scan.size());
    double c0 = 0.0, re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < scan.size(); ++j) {
        const double x = scan.samples[j] * scan.samples[j];
        const double arg = 2.0 * scan.phases[j];
        c0 += x;
        re += x * std::cos(arg);
        im -= x * std::sin(arg);
    }
    return {c0 / n, {re / n, im / n}};
}

EstimateResult fit_estimate(const HomodyneScan &scan) {
    scan.validate();
    require_samples(scan.size(), 3, "fit_estimate");
    const FourierComponents fc = fourier_components(scan);
    const double mag = std::abs(fc.c2);
    const double lo = fc.c0 - 2.0 * mag; // kappa s
    const double hi = fc.c0 + 2.0 * mag; // kappa / s

    EstimateResult r;
    r.method = Method::Fit;
    r.iterations = 1;
    r.params.s = std::sqrt(std::abs(lo) / hi);
    r.params.kappa = std::sqrt(std::abs(lo) * hi);
    if (mag == 0.0) {
        r.flags.set(EstimateFlag::Degenerate);
        r.params.phi_s = 0.0;
    } else {
        // The minimum of V sits opposite the phase of c2.
        r.params.phi_s = canonical_angle(-0.5 * std::arg(-fc.c2));
    }
    r.physical = lo > 0.0 && r.params.is_physical();
    if (!r.physical) {
        r.flags.set(EstimateFlag::NonPhysical);
    }

    if (finite_params(r.params) && r.params.s > 0.0 && r.params.s <= 1.0 && r.params.kappa > 0.0) {
        const BoundVector v = fit_variance_prediction(r.params, scan.size());
        r.predicted_cov = SymMatrix3::diagonal(v.var_s, v.var_kappa, v.var_phi);
    } else {
        r.flags.set(EstimateFlag::Degenerate);
        r.predicted_cov = SymMatrix3::diagonal(kInfiniteBound, kInfiniteBound, kInfiniteBound);
    }
    return r;
}

std::array<double, 3> mom_weights(const StateParams &prior, double psi) {
    const double v = eval_variance(prior, psi);
    const auto g = variance_gradient(prior, psi);
    const double w = 0.5 / (v * v);
    return {w * g[0], w * g[1], w * g[2]};
}

EstimateResult mom_step(const HomodyneScan &scan, const StateParams &prior, MomSolver solver) {
    scan.validate();
    require_samples(scan.size(), 3, "mom_step");
    check_prior(prior, "mom_step");
    if (prior.s > 1.0) {
        throw std::invalid_argument("mom_step: prior s must not exceed 1");
    }
    const StepOutcome step = run_step(scan, prior, solver);

    EstimateResult r;
    r.method = Method::MoM;
    r.iterations = 1;
    r.prior_used = prior;
    r.params = step.params;
    r.physical = !step.guard_triggered && r.params.is_physical();
    if (!r.physical) {
        r.flags.set(EstimateFlag::NonPhysical);
    }
    if (step.degenerate) {
        r.flags.set(EstimateFlag::Degenerate);
    }
    if (step.singular_prior) {
        r.flags.set(EstimateFlag::SingularPrior);
    }
    r.predicted_cov = homodyne_covariance_at(r.params, scan.phases, r.flags);
    return r;
}

EstimateResult mom_estimate(const HomodyneScan &scan, std::optional<StateParams> prior,
                            const MomOptions &options) {
    scan.validate();
    require_samples(scan.size(), 3, "mom_estimate");
    if (options.max_iter == 0) {
        throw std::invalid_argument("mom_estimate: max_iter must be >= 1");
    }

    EstimateResult r;
    r.method = Method::MoM;

    StateParams current;
    if (prior) {
        check_prior(*prior, "mom_estimate");
        current = {prior->s, prior->kappa, canonical_angle(prior->phi_s)};
        if (current.s > 1.0) {
            current = swap_axes(current);
        }
    } else {
        const EstimateResult seed = fit_estimate(scan);
        if (finite_params(seed.params) && seed.params.s > 0.0) {
            current = {std::clamp(seed.params.s, 0.01, 1.0),
                       std::clamp(seed.params.kappa, 1.0, 100.0), seed.params.phi_s};
        } else {
            current = {0.5, 2.0, 0.0};
            r.flags.set(EstimateFlag::SeedFallback);
        }
    }
    r.prior_used = current;

    StepOutcome last;
    bool converged = false;
    while (r.iterations < options.max_iter) {
        last = run_step(scan, current, options.solver);
        ++r.iterations;
        StateParams next = last.params;
        if (!finite_params(next) || !(next.s > 1e-12) || !(next.kappa > 0.0)) {
            // Diverged; report the raw update.
            current = next;
            last.guard_triggered = true;
            break;
        }
        if (next.s > 1.0) {
            next = swap_axes(next);
        }
        const double change =
            std::max({std::abs(next.s - current.s) / next.s,
                      std::abs(next.kappa - current.kappa) / next.kappa,
                      circular_distance(next.phi_s, current.phi_s) * (1.0 - next.s) / next.s});
        current = next;
        if (change < options.tol) {
            converged = true;
            break;
        }
        if (last.singular_prior && current.s >= 1.0) {
            break;
        }
    }

    r.params = current;
    r.physical = !last.guard_triggered && current.is_physical();
    if (!r.physical) {
        r.flags.set(EstimateFlag::NonPhysical);
    }
    if (last.degenerate) {
        r.flags.set(EstimateFlag::Degenerate);
    }
    if (last.singular_prior) {
        r.flags.set(EstimateFlag::SingularPrior);
    }
    if (!converged) {
        r.flags.set(EstimateFlag::NoConvergence);
    }
    r.predicted_cov = homodyne_covariance_at(current, scan.phases, r.flags);
    return r;
}

EstimateResult dhd_estimate(const DhdBatch &batch) {
    batch.validate();
    require_samples(batch.mu(), 3, "dhd_estimate");
    const double n = static_cast<double>(batch.mu());
    double qq = 0.0, pp = 0.0, qp = 0.0;
    for (std::size_t i = 0; i < batch.mu(); ++i) {
        qq += batch.q1[i] * batch.q1[i];
        pp += batch.p2[i] * batch.p2[i];
        qp += batch.q1[i] * batch.p2[i];
    }
    const SymMatrix2 gamma_theta =
        SymMatrix2{qq / n, qp / n, pp / n} - SymMatrix2::identity();
    const Eigen2 e = eigen_decompose(gamma_theta);

    EstimateResult r;
    r.method = Method::DHD;
    r.iterations = 1;
    const double lmin = std::abs(e.lambda_min);
    const double lmax = std::abs(e.lambda_max);
    r.params = {std::sqrt(lmin / lmax), std::sqrt(lmin * lmax), e.angle_min};
    r.physical = e.lambda_min > 0.0 && r.params.is_physical();
    if (!r.physical) {
        r.flags.set(EstimateFlag::NonPhysical);
    }
    if (e.degenerate) {
        r.flags.set(EstimateFlag::Degenerate);
    }
    if (finite_params(r.params) && r.params.s > 0.0 && r.params.kappa > 0.0) {
        const SymMatrix3 info = fisher_dhd(r.params);
        if (is_singular_information(info)) {
            r.flags.set(EstimateFlag::SingularInformation);
        }
        r.predicted_cov = covariance_from_information(info) * (1.0 / n);
    } else {
        r.flags.set(EstimateFlag::SingularInformation);
        r.predicted_cov = SymMatrix3::diagonal(kInfiniteBound, kInfiniteBound, kInfiniteBound);
    }
    return r;
}

} // namespace squeezelab
