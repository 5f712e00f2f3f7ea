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
 * Parameterization of zero-mean single-mode Gaussian states.
 *
 * All variances are in shot-noise units: the vacuum quadrature variance is 1
 * (not 1/2). A state is described by the triple (s, kappa, phi_s):
 *
 *   V(psi) = kappa s cos^2(psi - phi_s) + (kappa / s) sin^2(psi - phi_s)
 *
 * so the quadrature at psi = phi_s has the smallest variance kappa s and the
 * orthogonal one the largest, kappa / s. The purity is 1 / kappa. Since V is
 * pi-periodic in phi_s, angles are kept in [0, pi) and compared modulo pi.
 */

#pragma once

#include <array>
#include <string_view>

#include "squeezelab/matrix.hpp"

namespace squeezelab {

/// Reference squeezing magnitude (dB) of the characterized source.
inline constexpr double kReferenceSqueezingDb = 3.4;

/// The parameter triple theta = (s, kappa, phi_s).
///
/// Estimators may produce triples outside the physical domain (for example
/// kappa < 1 from statistical noise); such values are stored as-is and
/// reported through is_physical().
struct StateParams {
    double s = 1.0;
    double kappa = 1.0;
    double phi_s = 0.0;

    /// 0 < s <= 1, kappa >= 1, all finite. The edges s = 1 and kappa = 1
    /// allow 1e-12 relative slack, so a pure or unsqueezed state that went
    /// through floating-point arithmetic still counts as physical.
    [[nodiscard]] bool is_physical() const noexcept;
    [[nodiscard]] double purity() const noexcept { return 1.0 / kappa; }
    [[nodiscard]] double squeezed_variance() const noexcept { return kappa * s; }
    [[nodiscard]] double antisqueezed_variance() const noexcept { return kappa / s; }

    friend bool operator==(const StateParams &, const StateParams &) = default;
};

/// Validating constructor: throws std::invalid_argument outside the physical
/// domain and canonicalizes phi_s into [0, pi).
StateParams make_state(double s, double kappa, double phi_s = 0.0);

/// Throws std::invalid_argument naming `what` if params are not physical.
void require_physical(const StateParams &params, std::string_view what);

/// Maps any angle into [0, pi).
double canonical_angle(double phi) noexcept;
/// Signed difference a - b wrapped into [-pi/2, pi/2).
double angle_difference(double a, double b) noexcept;
/// |angle_difference(a, b)|.
double circular_distance(double a, double b) noexcept;

/// Quadrature variance V(psi) at local-oscillator phase psi.
double eval_variance(const StateParams &params, double psi) noexcept;

/// Analytic partial derivatives (dV/ds, dV/dkappa, dV/dphi_s) at psi.
std::array<double, 3> variance_gradient(const StateParams &params, double psi) noexcept;

/// Quadrature covariance matrix Gamma_theta over (x, p). Its eigenvalues are
/// kappa s and kappa / s; the small one has eigenvector angle phi_s.
SymMatrix2 state_covariance(const StateParams &params);

/// Inverse of state_covariance for a positive definite matrix.
StateParams params_from_covariance(const SymMatrix2 &gamma);

/// Squeezing level L = 10 log10(kappa s) in dB; negative means sub-shot-noise.
double squeezing_db(const StateParams &params);

/// Member of the kappa = 1/sqrt(s) family observed across temporal modes.
StateParams empirical_family(double s, double phi_s = 0.0);

/// s of the kappa = 1/sqrt(s) family member whose squeezing level is `db`
/// (db <= 0).
double family_s_for_squeezing_db(double db);

} // namespace squeezelab
