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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "squeezelab/bounds.hpp"
#include "squeezelab/estimators.hpp"
#include "squeezelab/simulator.hpp"

namespace squeezelab {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<StateParams> grid() {
    std::vector<StateParams> out;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            for (double phi : {0.0, 0.5, 1.5, 3.0}) {
                out.push_back({0.1 + 0.09 * i, 1.0 + 0.5 * j, phi});
            }
        }
    }
    return out;
}

void expect_params_near(const StateParams &got, const StateParams &want, double tol) {
    EXPECT_NEAR(got.s, want.s, tol);
    EXPECT_NEAR(got.kappa, want.kappa, tol);
    EXPECT_NEAR(circular_distance(got.phi_s, want.phi_s), 0.0, tol);
}

HomodyneScan rotated(HomodyneScan scan, double delta) {
    for (double &p : scan.phases) {
        p += delta;
    }
    return scan;
}

TEST(MethodTest, NamesRoundTrip) {
    for (Method m : {Method::Fit, Method::MoM, Method::DHD}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_method("MoM"), Method::MoM);
    EXPECT_THROW(parse_method("mle"), std::invalid_argument);
}

TEST(FlagsTest, Names) {
    EstimateFlags f;
    EXPECT_FALSE(f.any());
    f.set(EstimateFlag::NonPhysical);
    f.set(EstimateFlag::Degenerate);
    EXPECT_TRUE(f.test(EstimateFlag::Degenerate));
    EXPECT_EQ(f.names(), (std::vector<std::string>{"NonPhysical", "Degenerate"}));
    f.clear(EstimateFlag::NonPhysical);
    EXPECT_EQ(f.names(), (std::vector<std::string>{"Degenerate"}));
}

TEST(FourierTest, SingleSample) {
    HomodyneScan scan;
    scan.phases = {0.0};
    scan.samples = {2.0};
    const FourierComponents c = fourier_components(scan);
    EXPECT_DOUBLE_EQ(c.c0, 4.0);
    EXPECT_DOUBLE_EQ(c.c2.real(), 4.0);
    EXPECT_DOUBLE_EQ(c.c2.imag(), 0.0);
}

TEST(FourierTest, ExpectedMoments) {
    const StateParams p{0.5, 2.0, 0.3};
    const FourierComponents c = fourier_components(expected_moment_scan(p, {}));
    EXPECT_NEAR(c.c0, 2.0 * (1.0 + 0.25) / (2.0 * 0.5), 1e-12);
    EXPECT_NEAR(c.c2.real(), -2.0 * (1.0 - 0.25) * std::cos(0.6) / (4.0 * 0.5), 1e-12);
    const FourierComponents v = fourier_components(expected_moment_scan({1.0, 1.0, 0.0}, {}));
    EXPECT_NEAR(v.c0, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(v.c2), 0.0, 1e-14);
}

TEST(FitTest, ExactOnExpectedMomentsOverGrid) {
    for (const StateParams &p : grid()) {
        const EstimateResult r = fit_estimate(expected_moment_scan(p, {}));
        EXPECT_NEAR(r.params.s, p.s, 1e-10);
        EXPECT_NEAR(r.params.kappa, p.kappa, 1e-10);
        EXPECT_NEAR(circular_distance(r.params.phi_s, p.phi_s), 0.0, 1e-10) << p.s << " " << p.phi_s;
        EXPECT_TRUE(r.physical);
        EXPECT_EQ(r.method, Method::Fit);
    }
}

TEST(FitTest, PaperPointRecovery) {
    const EstimateResult r = fit_estimate(expected_moment_scan({0.5, 2.0, 0.3}, {}));
    expect_params_near(r.params, {0.5, 2.0, 0.3}, 1e-12);
    const BoundVector pred = fit_variance_prediction({0.5, 2.0, 0.3}, 900);
    EXPECT_NEAR(r.predicted_cov(0, 0), pred.var_s, 1e-12);
    EXPECT_EQ(r.predicted_cov(0, 1), 0.0);
}

TEST(FitTest, VacuumWithZeroC2IsDegenerate) {
    HomodyneScan scan;
    scan.phases = {0.0, 0.0, 0.5 * kPi, -0.5 * kPi};
    scan.samples = {1.0, 1.0, 1.0, 1.0};
    ASSERT_EQ(fourier_components(scan).c2, std::complex<double>(0.0, 0.0));
    const EstimateResult r = fit_estimate(scan);
    EXPECT_DOUBLE_EQ(r.params.s, 1.0);
    EXPECT_DOUBLE_EQ(r.params.kappa, 1.0);
    EXPECT_EQ(r.params.phi_s, 0.0);
    EXPECT_TRUE(r.flags.test(EstimateFlag::Degenerate));
}

TEST(FitTest, NegativeSqueezedVarianceIsFlaggedNotClamped) {
    HomodyneScan scan;
    scan.phases = {0.0, 1.0, 2.0};
    scan.samples = {3.0, 0.0, 0.0};
    const EstimateResult r = fit_estimate(scan);
    EXPECT_FALSE(r.physical);
    EXPECT_TRUE(r.flags.test(EstimateFlag::NonPhysical));
    EXPECT_TRUE(std::isfinite(r.params.s));
    EXPECT_TRUE(std::isfinite(r.params.kappa));
}

TEST(FitTest, RotationEquivariance) {
    const HomodyneScan scan = sample_homodyne_scan({0.3, 1.8, 0.4}, {}, 99);
    const EstimateResult a = fit_estimate(scan);
    for (double delta : {0.3, 1.2, 2.8}) {
        const EstimateResult b = fit_estimate(rotated(scan, delta));
        EXPECT_NEAR(b.params.s, a.params.s, 1e-10);
        EXPECT_NEAR(b.params.kappa, a.params.kappa, 1e-10);
        EXPECT_NEAR(angle_difference(b.params.phi_s, a.params.phi_s + delta), 0.0, 1e-10);
    }
}

TEST(FitTest, ScalingOfSamples) {
    HomodyneScan scan = sample_homodyne_scan({0.3, 1.8, 0.4}, {}, 7);
    const EstimateResult a = fit_estimate(scan);
    const double g = 1.7;
    for (double &q : scan.samples) {
        q *= g;
    }
    const EstimateResult b = fit_estimate(scan);
    EXPECT_NEAR(b.params.s, a.params.s, 1e-12);
    EXPECT_NEAR(b.params.kappa, g * g * a.params.kappa, 1e-12);
    EXPECT_NEAR(b.params.phi_s, a.params.phi_s, 1e-12);
}

TEST(FitTest, TooFewSamplesThrows) {
    HomodyneScan scan;
    scan.phases = {0.0, 1.0};
    scan.samples = {1.0, 1.0};
    EXPECT_THROW(fit_estimate(scan), std::invalid_argument);
}

TEST(MomWeightsTest, MatchFiniteDifferenceGradient) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> us(0.1, 0.95), uk(1.0, 4.0), ua(0.0, kPi);
    for (int rep = 0; rep < 40; ++rep) {
        const StateParams p{us(gen), uk(gen), ua(gen)};
        const double psi = ua(gen);
        const double v = eval_variance(p, psi);
        const auto c = mom_weights(p, psi);
        const double h = 1e-6;
        for (int a = 0; a < 3; ++a) {
            StateParams up = p, dn = p;
            (a == 0 ? up.s : a == 1 ? up.kappa : up.phi_s) += h;
            (a == 0 ? dn.s : a == 1 ? dn.kappa : dn.phi_s) -= h;
            const double fd = (eval_variance(up, psi) - eval_variance(dn, psi)) / (2 * h) / (2 * v * v);
            EXPECT_NEAR(c[a], fd, 1e-6 * (1.0 + std::abs(fd)));
        }
    }
}

TEST(MomWeightsTest, SpecialCases) {
    for (double psi = 0.0; psi < kPi; psi += 0.3) {
        EXPECT_EQ(mom_weights({1.0, 1.0, 0.0}, psi)[2], 0.0);
    }
    // psi = phi_s: dV/ds = kappa, V = kappa s.
    const StateParams p{0.4, 2.5, 0.7};
    EXPECT_NEAR(mom_weights(p, 0.7)[0], 1.0 / (2.0 * 2.5 * 0.4 * 0.4), 1e-14);
}

TEST(MomStepTest, FixedPointOverGrid) {
    for (MomSolver solver : {MomSolver::ClosedForm, MomSolver::LinearSystem}) {
        for (const StateParams &p : grid()) {
            if (p.s >= 1.0) {
                continue;
            }
            const EstimateResult r = mom_step(expected_moment_scan(p, {}), p, solver);
            EXPECT_NEAR(r.params.s, p.s, 1e-10);
            EXPECT_NEAR(r.params.kappa, p.kappa, 1e-10);
            EXPECT_NEAR(circular_distance(r.params.phi_s, p.phi_s), 0.0, 1e-10);
            EXPECT_TRUE(r.physical) << p.s << " " << p.kappa;
            EXPECT_FALSE(r.flags.any());
        }
    }
}

TEST(MomStepTest, ClosedFormExactInSAndKappaWhenAngleIsRight) {
    const StateParams truth{0.3, 1.9, 0.8};
    const EstimateResult r =
        mom_step(expected_moment_scan(truth, {}), {0.6, 1.2, 0.8}, MomSolver::ClosedForm);
    EXPECT_NEAR(r.params.s, truth.s, 1e-10);
    EXPECT_NEAR(r.params.kappa, truth.kappa, 1e-10);
}

TEST(MomStepTest, LinearSystemIsExactFromAnyPrior) {
    const StateParams truth{0.3, 1.9, 0.8};
    const EstimateResult r =
        mom_step(expected_moment_scan(truth, {}), {0.6, 1.2, 0.1}, MomSolver::LinearSystem);
    expect_params_near(r.params, truth, 1e-10);
}

TEST(MomStepTest, PredictedCovarianceIsInverseDiscreteFisher) {
    const StateParams p{0.5, 2.0, 0.3};
    const HomodyneScan scan = expected_moment_scan(p, {});
    const EstimateResult r = mom_step(scan, p);
    const auto inv = fisher_homodyne_discrete(p, scan.phases).inverse();
    ASSERT_TRUE(inv.has_value());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.predicted_cov(i, i) / (*inv)(i, i), 1.0, 1e-10);
    }
}

TEST(MomStepTest, IsotropicPriorIsSingular) {
    const HomodyneScan scan = sample_homodyne_scan({0.5, 2.0, 0.3}, {}, 1);
    const EstimateResult r = mom_step(scan, {1.0, 1.0, 0.4});
    EXPECT_TRUE(r.flags.test(EstimateFlag::SingularPrior));
    EXPECT_EQ(r.params.phi_s, 0.4);
    EXPECT_THROW(mom_step(scan, {1.5, 1.0, 0.0}), std::invalid_argument);
}

TEST(MomEstimateTest, PriorAtTruthOnExpectedMoments) {
    const StateParams p{0.5, 2.0, 0.3};
    const EstimateResult r = mom_estimate(expected_moment_scan(p, {}), p);
    expect_params_near(r.params, p, 1e-10);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_FALSE(r.flags.test(EstimateFlag::NoConvergence));
    ASSERT_TRUE(r.prior_used.has_value());
    EXPECT_EQ(*r.prior_used, p);
}

TEST(MomEstimateTest, ConvergesFromArbitraryPriorWithinFiveIterations) {
    // After at most five steps from a poor prior, the estimate sits within
    // statistical noise of the truth.
    const MomOptions five{5, 1e-6, MomSolver::ClosedForm};
    for (double s : {0.2, 0.35, 0.6}) {
        const StateParams truth = empirical_family(s, 0.5);
        const BoundVector crb = crb_homodyne(truth, 900);
        int inside = 0;
        const int scans = 100;
        for (int t = 0; t < scans; ++t) {
            const HomodyneScan scan = sample_homodyne_scan(truth, {}, 4242, t);
            const EstimateResult r = mom_estimate(scan, StateParams{0.9, 1.1, 1.0}, five);
            const bool ok = std::abs(r.params.s - truth.s) < 4 * std::sqrt(crb.var_s) &&
                            std::abs(r.params.kappa - truth.kappa) < 4 * std::sqrt(crb.var_kappa) &&
                            circular_distance(r.params.phi_s, truth.phi_s) <
                                4 * std::sqrt(crb.var_phi);
            inside += ok ? 1 : 0;
        }
        EXPECT_GE(inside, 97) << "s=" << s;
    }
}

TEST(MomEstimateTest, DefaultSeedMatchesExplicitFitSeed) {
    const HomodyneScan scan = sample_homodyne_scan(empirical_family(0.3), {}, 17);
    const EstimateResult a = mom_estimate(scan);
    ASSERT_TRUE(a.prior_used.has_value());
    const EstimateResult fit = fit_estimate(scan);
    EXPECT_NEAR(a.prior_used->s, std::clamp(fit.params.s, 0.01, 1.0), 0.0);
    EXPECT_EQ(a.method, Method::MoM);
    EXPECT_TRUE(a.physical);
    EXPECT_FALSE(a.flags.test(EstimateFlag::NoConvergence));
    EXPECT_LE(a.iterations, 20u);
}

TEST(MomEstimateTest, RotationEquivarianceWithRotatedPrior) {
    const StateParams truth{0.3, 1.8, 0.4};
    const HomodyneScan scan = sample_homodyne_scan(truth, {}, 5);
    const StateParams prior{0.35, 1.7, 0.5};
    const EstimateResult a = mom_estimate(scan, prior);
    const double delta = 0.9;
    const EstimateResult b =
        mom_estimate(rotated(scan, delta), StateParams{prior.s, prior.kappa, prior.phi_s + delta});
    EXPECT_NEAR(b.params.s, a.params.s, 1e-10);
    EXPECT_NEAR(b.params.kappa, a.params.kappa, 1e-10);
    EXPECT_NEAR(angle_difference(b.params.phi_s, a.params.phi_s + delta), 0.0, 1e-10);
}

TEST(MomEstimateTest, VacuumDataFlagsSingularPrior) {
    const HomodyneScan scan = expected_moment_scan({1.0, 1.0, 0.0}, {});
    const EstimateResult r = mom_estimate(scan, StateParams{1.0, 1.0, 0.0});
    EXPECT_NEAR(r.params.s, 1.0, 1e-10);
    EXPECT_NEAR(r.params.kappa, 1.0, 1e-10);
    EXPECT_TRUE(r.flags.test(EstimateFlag::SingularPrior));
}

TEST(MomEstimateTest, RejectsBadOptions) {
    const HomodyneScan scan = expected_moment_scan({0.5, 2.0, 0.0}, {});
    EXPECT_THROW(mom_estimate(scan, {}, MomOptions{0, 1e-6, MomSolver::ClosedForm}),
                 std::invalid_argument);
    EXPECT_THROW(mom_estimate(scan, StateParams{-1.0, 2.0, 0.0}), std::invalid_argument);
}

// A batch whose sample second moments equal `sigma` exactly.
DhdBatch exact_batch(const SymMatrix2 &sigma) {
    const double l11 = std::sqrt(sigma.xx);
    const double l21 = sigma.xp / l11;
    const double l22 = std::sqrt(sigma.pp - l21 * l21);
    const double r = std::sqrt(2.0);
    DhdBatch b;
    b.q1 = {r * l11, -r * l11, 0.0, 0.0};
    b.p2 = {r * l21, -r * l21, r * l22, -r * l22};
    return b;
}

TEST(DhdEstimateTest, EigenRoundTrip) {
    for (const StateParams &p : {StateParams{0.5, 2.0, 0.3}, StateParams{0.2, 2.2, 2.5},
                                 StateParams{0.9, 1.05, 1.2}}) {
        const EstimateResult r =
            dhd_estimate(exact_batch(state_covariance(p) + SymMatrix2::identity()));
        expect_params_near(r.params, p, 1e-10);
        EXPECT_TRUE(r.physical);
        EXPECT_EQ(r.method, Method::DHD);
        const auto inv = fisher_dhd(p).inverse();
        ASSERT_TRUE(inv.has_value());
        EXPECT_NEAR(r.predicted_cov(0, 0), (*inv)(0, 0) / 4.0, 1e-10);
    }
}

TEST(DhdEstimateTest, IsotropicIsDegenerate) {
    const EstimateResult r = dhd_estimate(exact_batch({2.0, 0.0, 2.0}));
    EXPECT_TRUE(r.flags.test(EstimateFlag::Degenerate));
    EXPECT_EQ(r.params.phi_s, 0.0);
    EXPECT_NEAR(r.params.s, 1.0, 1e-12);
}

TEST(DhdEstimateTest, NoisyVacuumGoesNonPhysical) {
    bool seen = false;
    for (std::uint32_t trial = 0; trial < 200 && !seen; ++trial) {
        const EstimateResult r = dhd_estimate(sample_dhd({1.0, 1.0, 0.0}, 5, 77, trial));
        if (!r.physical) {
            seen = true;
            EXPECT_TRUE(r.flags.test(EstimateFlag::NonPhysical));
            EXPECT_TRUE(std::isfinite(r.params.s));
            EXPECT_TRUE(std::isfinite(r.params.kappa));
        }
    }
    EXPECT_TRUE(seen);
}

TEST(DhdEstimateTest, RejectsTinyBatch) {
    DhdBatch b;
    b.q1 = {1.0, 2.0};
    b.p2 = {0.5, 0.1};
    EXPECT_THROW(dhd_estimate(b), std::invalid_argument);
}

} // namespace
} // namespace squeezelab
