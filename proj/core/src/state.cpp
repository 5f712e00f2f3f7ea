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

#include "squeezelab/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace squeezelab {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

bool StateParams::is_physical() const noexcept {
    constexpr double kEdge = 1e-12;
    return std::isfinite(s) && std::isfinite(kappa) && std::isfinite(phi_s) && s > 0.0 &&
           s <= 1.0 + kEdge && kappa >= 1.0 - kEdge;
}

StateParams make_state(double s, double kappa, double phi_s) {
    StateParams p{s, kappa, canonical_angle(phi_s)};
    require_physical(p, "make_state");
    return p;
}

void require_physical(const StateParams &params, std::string_view what) {
    if (!params.is_physical()) {
        throw std::invalid_argument(std::string(what) +
                                    ": state parameters outside 0 < s <= 1, kappa >= 1 (s=" +
                                    std::to_string(params.s) +
                                    ", kappa=" + std::to_string(params.kappa) + ")");
    }
}

double canonical_angle(double phi) noexcept {
    double r = std::fmod(phi, kPi);
    if (r < 0.0) {
        r += kPi;
    }
    // fmod of a tiny negative number can round up to exactly pi
    return r >= kPi ? 0.0 : r;
}

double angle_difference(double a, double b) noexcept {
    double d = canonical_angle(a - b);
    if (d >= 0.5 * kPi) {
        d -= kPi;
    }
    return d;
}

double circular_distance(double a, double b) noexcept { return std::abs(angle_difference(a, b)); }

double eval_variance(const StateParams &params, double psi) noexcept {
    const double c = std::cos(psi - params.phi_s);
    const double sn = std::sin(psi - params.phi_s);
    return params.kappa * params.s * c * c + params.kappa / params.s * sn * sn;
}

std::array<double, 3> variance_gradient(const StateParams &params, double psi) noexcept {
    const double d = psi - params.phi_s;
    const double c = std::cos(d);
    const double sn = std::sin(d);
    const double k = params.kappa;
    const double s = params.s;
    return {
        k * c * c - k / (s * s) * sn * sn,
        s * c * c + sn * sn / s,
        k * (s - 1.0 / s) * std::sin(2.0 * d),
    };
}

SymMatrix2 state_covariance(const StateParams &params) {
    const double small = params.kappa * params.s;
    const double large = params.kappa / params.s;
    const double c = std::cos(params.phi_s);
    const double sn = std::sin(params.phi_s);
    return {
        small * c * c + large * sn * sn,
        (small - large) * c * sn,
        small * sn * sn + large * c * c,
    };
}

StateParams params_from_covariance(const SymMatrix2 &gamma) {
    const Eigen2 e = eigen_decompose(gamma);
    return {std::sqrt(e.lambda_min / e.lambda_max), std::sqrt(e.lambda_min * e.lambda_max),
            e.angle_min};
}

double squeezing_db(const StateParams &params) {
    return 10.0 * std::log10(params.kappa * params.s);
}

StateParams empirical_family(double s, double phi_s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw std::invalid_argument("empirical_family: s must lie in (0, 1]");
    }
    return {s, 1.0 / std::sqrt(s), canonical_angle(phi_s)};
}

double family_s_for_squeezing_db(double db) {
    if (db > 0.0) {
        throw std::invalid_argument("family_s_for_squeezing_db: level must be <= 0 dB");
    }
    // kappa s = sqrt(s) on the family, so L = 5 log10(s).
    return std::pow(10.0, db / 5.0);
}

} // namespace squeezelab
