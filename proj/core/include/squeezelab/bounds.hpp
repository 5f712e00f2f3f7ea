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
 * Fisher information, Cramer-Rao bounds and estimator variance predictions.
 *
 * Bounds that diverge (the angle bound of an isotropic state, for instance)
 * are reported as +infinity, never as an overflowed finite value. Callers
 * must check std::isinf before dividing by them.
 */

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>

#include "squeezelab/matrix.hpp"
#include "squeezelab/state.hpp"

namespace squeezelab {

inline constexpr double kInfiniteBound = std::numeric_limits<double>::infinity();

/// Per-parameter variance bound normalized to `n_samples` measurements.
struct BoundVector {
    double var_s = 0.0;
    double var_kappa = 0.0;
    double var_phi = 0.0;
    std::size_t n_samples = 1;

    [[nodiscard]] std::array<double, 3> as_array() const { return {var_s, var_kappa, var_phi}; }
    [[nodiscard]] double operator[](std::size_t i) const { return as_array()[i]; }
};

/// Homodyne Fisher information of one sample per phase in `phases`:
/// F_ab = sum_j dV_j/da dV_j/db / (2 V_j^2).
SymMatrix3 fisher_homodyne_discrete(const StateParams &params, std::span<const double> phases);

/// Phase-averaged homodyne information carried by a single sample, from
/// `phase_count` equispaced phases over [0, pi).
SymMatrix3 fisher_homodyne_per_sample(const StateParams &params, std::size_t phase_count = 4096);

/// True when the matrix fails the conditioning check used by inverse().
bool is_singular_information(const SymMatrix3 &info);

/// Inverse of an information matrix. Parameters whose row is identically zero
/// get an infinite variance and zero covariances; the remaining block is
/// inverted. A block that is still ill-conditioned yields infinity throughout.
SymMatrix3 covariance_from_information(const SymMatrix3 &info);

/// Diagonal of covariance_from_information, labelled with `n_samples`.
BoundVector bound_from_information(const SymMatrix3 &info, std::size_t n_samples);

/// Closed-form homodyne CRB for a uniform phase scan:
/// (s(1+s)^2, kappa^2 (1+s^2)/s, s/(1-s)^2) / n_samples.
BoundVector crb_homodyne(const StateParams &params, std::size_t n_samples);

/// Error-propagation variance of the Fourier least-squares fit.
BoundVector fit_variance_prediction(const StateParams &params, std::size_t n_samples);

/// Double-homodyne Fisher information per repetition:
/// F_ab = Tr[G^-1 dG/da G^-1 dG/db] / 2 with G = Gamma_theta + I.
SymMatrix3 fisher_dhd(const StateParams &params);

/// Analytic derivatives dGamma/d(s, kappa, phi_s) of the state covariance.
std::array<SymMatrix2, 3> covariance_gradient(const StateParams &params);

/// Closed-form double-homodyne CRB for `mu` repetitions.
BoundVector crb_dhd(const StateParams &params, std::size_t mu);

/// Quantum Fisher information matrix (diagonal in this parameterization).
/// The kappa entry is +infinity for a pure state.
SymMatrix3 qfi_matrix(const StateParams &params);

/// Quantum CRB diagonal 1 / (n F^Q_aa).
BoundVector qcrb(const StateParams &params, std::size_t n_samples);

} // namespace squeezelab
