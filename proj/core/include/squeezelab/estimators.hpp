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
 * Estimators of (s, kappa, phi_s):
 *
 *  - fit_estimate: least-squares fit of V(psi) to q_j^2, solved in closed
 *    form through the 0th and 2nd Fourier components of q_j^2.
 *  - mom_step / mom_estimate: method of moments with the optimal weights
 *    c_a = (dV/da) / (2 V^2) evaluated at a prior, iterated to a fixed point.
 *  - dhd_estimate: eigensystem of the sample covariance of double-homodyne
 *    data minus the added vacuum.
 *
 * Estimates are never clamped. If an intermediate value leaves the physical
 * domain (a negative squeezed variance, s > 1, kappa < 1) the raw value is
 * reported, `physical` is false and the reason is in `flags`.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/matrix.hpp"
#include "squeezelab/scan.hpp"
#include "squeezelab/state.hpp"

namespace squeezelab {

enum class Method { Fit, MoM, DHD };

std::string_view to_string(Method m);
/// Accepts "fit", "mom", "dhd" (case-insensitive). Throws std::invalid_argument.
Method parse_method(std::string_view name);

enum class EstimateFlag : std::uint32_t {
    NonPhysical = 1u << 0,
    Degenerate = 1u << 1,
    SingularPrior = 1u << 2,
    NoConvergence = 1u << 3,
    SeedFallback = 1u << 4,
    SingularInformation = 1u << 5,
};

class EstimateFlags {
  public:
    void set(EstimateFlag f) { bits_ |= static_cast<std::uint32_t>(f); }
    void clear(EstimateFlag f) { bits_ &= ~static_cast<std::uint32_t>(f); }
    [[nodiscard]] bool test(EstimateFlag f) const {
        return (bits_ & static_cast<std::uint32_t>(f)) != 0;
    }
    [[nodiscard]] bool any() const { return bits_ != 0; }
    [[nodiscard]] std::uint32_t bits() const { return bits_; }
    /// Flag names, e.g. {"NonPhysical", "Degenerate"}.
    [[nodiscard]] std::vector<std::string> names() const;

    friend bool operator==(const EstimateFlags &, const EstimateFlags &) = default;

  private:
    std::uint32_t bits_ = 0;
};

struct EstimateResult {
    StateParams params;
    /// Model covariance of the estimator evaluated at the estimate.
    SymMatrix3 predicted_cov;
    Method method = Method::Fit;
    bool physical = true;
    unsigned iterations = 0;
    std::optional<StateParams> prior_used;
    EstimateFlags flags;
};

struct FourierComponents {
    double c0 = 0.0;
    std::complex<double> c2;
};

/// c0 = <q^2>, c2 = <q^2 exp(-2 i psi)> over the scan.
FourierComponents fourier_components(const HomodyneScan &scan);

/// Closed-form least-squares fit. Requires at least 3 samples.
///
/// kappa s = c0 - 2|c2| and kappa / s = c0 + 2|c2|. When the first is not
/// positive, s and kappa are computed from its absolute value and the result
/// is flagged NonPhysical. When c2 == 0 the angle is undefined: phi_s = 0 and
/// Degenerate is set.
EstimateResult fit_estimate(const HomodyneScan &scan);

/// Optimal moment weights c_a(psi, prior) = dV/da / (2 V^2).
std::array<double, 3> mom_weights(const StateParams &prior, double psi);

enum class MomSolver {
    /// Closed-form solution expressed through y_a = <c_a q^2>; exact in s and
    /// kappa, first order in the angle offset from the prior.
    ClosedForm,
    /// Exact solution of the three moment equations, which are linear in the
    /// Fourier coefficients of the model.
    LinearSystem,
};

/// One moment-method update around `prior`.
///
/// Feeding expected moments (q_j^2 = V(psi_j, prior)) returns the prior.
/// A prior with s >= 1 carries no angle information: the angle is kept at
/// the prior's value and SingularPrior is set.
EstimateResult mom_step(const HomodyneScan &scan, const StateParams &prior,
                        MomSolver solver = MomSolver::ClosedForm);

struct MomOptions {
    unsigned max_iter = 20;
    /// Stop when max(|ds|/s, |dkappa|/kappa, |dphi| (1-s)/s) < tol.
    double tol = 1e-6;
    MomSolver solver = MomSolver::ClosedForm;
};

/// Iterated moment estimator. Without a prior, the fit estimate clamped to
/// s in [0.01, 1], kappa in [1, 100] seeds the iteration; if the fit itself is
/// unusable the seed is (0.5, 2, 0) and SeedFallback is set.
///
/// An update with s > 1 describes the same variance curve as
/// (1/s, kappa, phi_s + pi/2) and is relabelled before the next step.
EstimateResult mom_estimate(const HomodyneScan &scan, std::optional<StateParams> prior = {},
                            const MomOptions &options = {});

/// Double-homodyne estimator from the sample covariance minus identity.
/// Requires mu >= 3.
EstimateResult dhd_estimate(const DhdBatch &batch);

} // namespace squeezelab
