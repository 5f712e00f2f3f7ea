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

#include "squeezelab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace squeezelab {

namespace {

void require_positive(const StateParams &params, const char *what) {
    if (!(params.s > 0.0) || !(params.kappa > 0.0) || !std::isfinite(params.s) ||
        !std::isfinite(params.kappa)) {
        throw std::invalid_argument(std::string(what) + ": s and kappa must be positive");
    }
}

void require_unit_s(const StateParams &params, const char *what) {
    require_positive(params, what);
    if (params.s > 1.0) {
        throw std::invalid_argument(std::string(what) + ": s must lie in (0, 1]");
    }
}

void require_count(std::size_t n, const char *what) {
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + ": sample count must be >= 1");
    }
}

// General 2x2 matrix, row-major.
struct Mat2 {
    double a, b, c, d;
};

Mat2 mul(const Mat2 &x, const Mat2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

Mat2 as_mat(const SymMatrix2 &m) { return {m.xx, m.xp, m.xp, m.pp}; }

} // namespace

SymMatrix3 fisher_homodyne_discrete(const StateParams &params, std::span<const double> phases) {
    require_positive(params, "fisher_homodyne_discrete");
    if (phases.empty()) {
        throw std::invalid_argument("fisher_homodyne_discrete: no phases");
    }
    std::array<double, 6> acc{};
    for (double psi : phases) {
        const double v = eval_variance(params, psi);
        const auto g = variance_gradient(params, psi);
        const double w = 0.5 / (v * v);
        acc[0] += w * g[0] * g[0];
        acc[1] += w * g[0] * g[1];
        acc[2] += w * g[0] * g[2];
        acc[3] += w * g[1] * g[1];
        acc[4] += w * g[1] * g[2];
        acc[5] += w * g[2] * g[2];
    }
    SymMatrix3 f;
    f.set(0, 0, acc[0]);
    f.set(0, 1, acc[1]);
    f.set(0, 2, acc[2]);
    f.set(1, 1, acc[3]);
    f.set(1, 2, acc[4]);
    f.set(2, 2, acc[5]);
    return f;
}

SymMatrix3 fisher_homodyne_per_sample(const StateParams &params, std::size_t phase_count) {
    require_count(phase_count, "fisher_homodyne_per_sample");
    std::vector<double> phases(phase_count);
    for (std::size_t j = 0; j < phase_count; ++j) {
        phases[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(phase_count);
    }
    return fisher_homodyne_discrete(params, phases) * (1.0 / static_cast<double>(phase_count));
}

bool is_singular_information(const SymMatrix3 &info) { return !info.inverse().has_value(); }

SymMatrix3 covariance_from_information(const SymMatrix3 &info) {
    if (auto inv = info.inverse()) {
        return *inv;
    }
    const double sc = info.scale();
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < 3; ++i) {
        bool zero_row = true;
        for (std::size_t j = 0; j < 3; ++j) {
            if (std::abs(info(i, j)) > 1e-14 * sc) {
                zero_row = false;
            }
        }
        if (!zero_row) {
            live.push_back(i);
        }
    }

    SymMatrix3 cov = SymMatrix3::diagonal(kInfiniteBound, kInfiniteBound, kInfiniteBound);
    if (live.size() == 1) {
        const std::size_t i = live[0];
        cov.set(i, i, 1.0 / info(i, i));
    } else if (live.size() == 2) {
        const std::size_t i = live[0], j = live[1];
        const double a = info(i, i), b = info(i, j), d = info(j, j);
        const double det = a * d - b * b;
        const double blk = std::max({std::abs(a), std::abs(b), std::abs(d)});
        if (std::abs(det) >= 1e-12 * blk * blk) {
            cov.set(i, i, d / det);
            cov.set(j, j, a / det);
            cov.set(i, j, -b / det);
        }
    }
    return cov;
}

BoundVector bound_from_information(const SymMatrix3 &info, std::size_t n_samples) {
    const auto d = covariance_from_information(info).diag();
    return {d[0], d[1], d[2], n_samples};
}

BoundVector crb_homodyne(const StateParams &params, std::size_t n_samples) {
    require_unit_s(params, "crb_homodyne");
    require_count(n_samples, "crb_homodyne");
    const double s = params.s;
    const double k = params.kappa;
    const double n = static_cast<double>(n_samples);
    const double var_phi = s == 1.0 ? kInfiniteBound : s / ((1.0 - s) * (1.0 - s)) / n;
    return {s * (1.0 + s) * (1.0 + s) / n, k * k * (1.0 + s * s) / s / n, var_phi, n_samples};
}

BoundVector fit_variance_prediction(const StateParams &params, std::size_t n_samples) {
    require_unit_s(params, "fit_variance_prediction");
    require_count(n_samples, "fit_variance_prediction");
    const double s = params.s;
    const double k = params.kappa;
    const double n = static_cast<double>(n_samples);
    const double s2 = s * s, s4 = s2 * s2, s6 = s4 * s2, s8 = s4 * s4;
    const double var_s = (1.0 + 6.0 * s2 + 18.0 * s4 + 6.0 * s6 + s8) / (8.0 * s2);
    const double var_k = k * k * (1.0 - 2.0 * s2 + 18.0 * s4 - 2.0 * s6 + s8) / (8.0 * s4);
    const double var_phi =
        s == 1.0 ? kInfiniteBound : (5.0 + 6.0 * s2 + 5.0 * s4) / (4.0 * (1.0 - s2) * (1.0 - s2)) / n;
    return {var_s / n, var_k / n, var_phi, n_samples};
}

std::array<SymMatrix2, 3> covariance_gradient(const StateParams &params) {
    const double s = params.s;
    const double k = params.kappa;
    const double c = std::cos(params.phi_s);
    const double sn = std::sin(params.phi_s);
    // Gamma = k s u u^T + (k/s) v v^T with u = (c, sn), v = (-sn, c).
    const SymMatrix2 uu{c * c, c * sn, sn * sn};
    const SymMatrix2 vv{sn * sn, -c * sn, c * c};
    const SymMatrix2 uv_sym{-2.0 * c * sn, c * c - sn * sn, 2.0 * c * sn}; // u v^T + v u^T
    const double ds_small = k, ds_large = -k / (s * s);
    SymMatrix2 d_s{ds_small * uu.xx + ds_large * vv.xx, ds_small * uu.xp + ds_large * vv.xp,
                   ds_small * uu.pp + ds_large * vv.pp};
    SymMatrix2 d_k{s * uu.xx + vv.xx / s, s * uu.xp + vv.xp / s, s * uu.pp + vv.pp / s};
    const double f = k * s - k / s;
    SymMatrix2 d_phi{f * uv_sym.xx, f * uv_sym.xp, f * uv_sym.pp};
    return {d_s, d_k, d_phi};
}

SymMatrix3 fisher_dhd(const StateParams &params) {
    require_positive(params, "fisher_dhd");
    const SymMatrix2 g = state_covariance(params) + SymMatrix2::identity();
    const double det = g.determinant();
    const Mat2 g_inv{g.pp / det, -g.xp / det, -g.xp / det, g.xx / det};
    const auto grads = covariance_gradient(params);
    std::array<Mat2, 3> h{};
    for (std::size_t a = 0; a < 3; ++a) {
        h[a] = mul(g_inv, as_mat(grads[a]));
    }
    SymMatrix3 f;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a; b < 3; ++b) {
            const Mat2 p = mul(h[a], h[b]);
            f.set(a, b, 0.5 * (p.a + p.d));
        }
    }
    return f;
}

BoundVector crb_dhd(const StateParams &params, std::size_t mu) {
    require_unit_s(params, "crb_dhd");
    require_count(mu, "crb_dhd");
    const double s = params.s;
    const double k = params.kappa;
    const double n = static_cast<double>(mu);
    const double s2 = s * s;
    const double var_s = (s2 * s2 + 2.0 * k * s2 * s + 2.0 * k * k * s2 + 2.0 * k * s + 1.0) /
                         (2.0 * k * k);
    const double var_k = k * k + 0.5 * s2 + 0.5 / s2 + k * s + k / s;
    const double var_phi = s == 1.0 ? kInfiniteBound
                                    : s * (k + s) * (1.0 + k * s) /
                                          (k * k * (1.0 - s2) * (1.0 - s2)) / n;
    return {var_s / n, var_k / n, var_phi, mu};
}

SymMatrix3 qfi_matrix(const StateParams &params) {
    require_unit_s(params, "qfi_matrix");
    const double s = params.s;
    const double k2 = params.kappa * params.kappa;
    const double thermal = k2 / (k2 + 1.0);
    const double kk = params.kappa == 1.0 ? kInfiniteBound : 1.0 / (k2 - 1.0);
    const double one_minus = 1.0 - s * s;
    return SymMatrix3::diagonal(thermal / (s * s), kk, one_minus * one_minus / (s * s) * thermal);
}

BoundVector qcrb(const StateParams &params, std::size_t n_samples) {
    require_count(n_samples, "qcrb");
    const auto d = qfi_matrix(params).diag();
    const double n = static_cast<double>(n_samples);
    auto inv = [n](double f) {
        if (std::isinf(f)) {
            return 0.0;
        }
        return f == 0.0 ? kInfiniteBound : 1.0 / (n * f);
    };
    return {inv(d[0]), inv(d[1]), inv(d[2]), n_samples};
}

} // namespace squeezelab
