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

#include "squeezelab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "squeezelab/state.hpp"

namespace squeezelab {

Eigen2 eigen_decompose(const SymMatrix2 &m) {
    const double mid = 0.5 * (m.xx + m.pp);
    const double radius = std::hypot(0.5 * (m.xx - m.pp), m.xp);
    Eigen2 out;
    out.lambda_min = mid - radius;
    out.lambda_max = mid + radius;

    const double scale = std::max({std::abs(m.xx), std::abs(m.pp), std::abs(m.xp)});
    if (radius <= 1e-12 * scale || radius == 0.0) {
        out.degenerate = true;
        out.angle_min = 0.0;
        return out;
    }
    // Two candidate eigenvectors for lambda_min; keep the better conditioned one.
    const double ax = m.xp, ay = out.lambda_min - m.xx;
    const double bx = out.lambda_min - m.pp, by = m.xp;
    const bool use_a = ax * ax + ay * ay >= bx * bx + by * by;
    out.angle_min = canonical_angle(use_a ? std::atan2(ay, ax) : std::atan2(by, bx));
    return out;
}

SymMatrix3 SymMatrix3::diagonal(double d0, double d1, double d2) {
    SymMatrix3 m;
    m.set(0, 0, d0);
    m.set(1, 1, d1);
    m.set(2, 2, d2);
    return m;
}

double SymMatrix3::determinant() const {
    const auto &a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) -
           a(0, 1) * (a(0, 1) * a(2, 2) - a(1, 2) * a(0, 2)) +
           a(0, 2) * (a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2));
}

double SymMatrix3::scale() const {
    double s = 0.0;
    for (double x : v_) {
        s = std::max(s, std::abs(x));
    }
    return s;
}

std::optional<SymMatrix3> SymMatrix3::inverse(double rel_tol) const {
    const double sc = scale();
    const double det = determinant();
    if (!(sc > 0.0) || !std::isfinite(det) || std::abs(det) < rel_tol * sc * sc * sc) {
        return std::nullopt;
    }
    const auto &a = *this;
    SymMatrix3 inv;
    inv.set(0, 0, (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) / det);
    inv.set(0, 1, (a(0, 2) * a(1, 2) - a(0, 1) * a(2, 2)) / det);
    inv.set(0, 2, (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / det);
    inv.set(1, 1, (a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2)) / det);
    inv.set(1, 2, (a(0, 2) * a(0, 1) - a(0, 0) * a(1, 2)) / det);
    inv.set(2, 2, (a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1)) / det);
    return inv;
}

std::array<double, 3> SymMatrix3::eigenvalues() const {
    const auto &a = *this;
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off == 0.0) {
        std::array<double, 3> d = diag();
        std::sort(d.begin(), d.end());
        return d;
    }
    const double q = trace() / 3.0;
    const double d0 = a(0, 0) - q, d1 = a(1, 1) - q, d2 = a(2, 2) - q;
    const double p = std::sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off) / 6.0);
    SymMatrix3 b = *this;
    for (std::size_t i = 0; i < 3; ++i) {
        b.add(i, i, -q);
    }
    b *= 1.0 / p;
    const double r = std::clamp(0.5 * b.determinant(), -1.0, 1.0);
    const double angle = std::acos(r) / 3.0;
    const double largest = q + 2.0 * p * std::cos(angle);
    const double smallest = q + 2.0 * p * std::cos(angle + 2.0 * std::numbers::pi / 3.0);
    return {smallest, 3.0 * q - largest - smallest, largest};
}

bool SymMatrix3::is_psd(double rel_tol) const {
    return eigenvalues()[0] >= -rel_tol * scale();
}

SymMatrix3 &SymMatrix3::operator+=(const SymMatrix3 &o) {
    for (std::size_t k = 0; k < v_.size(); ++k) {
        v_[k] += o.v_[k];
    }
    return *this;
}

SymMatrix3 &SymMatrix3::operator-=(const SymMatrix3 &o) {
    for (std::size_t k = 0; k < v_.size(); ++k) {
        v_[k] -= o.v_[k];
    }
    return *this;
}

SymMatrix3 &SymMatrix3::operator*=(double f) {
    for (double &x : v_) {
        x *= f;
    }
    return *this;
}

std::optional<std::array<double, 3>>
solve3(const std::array<std::array<double, 3>, 3> &a, const std::array<double, 3> &b,
       double rel_tol) {
    auto det3 = [](const std::array<std::array<double, 3>, 3> &m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double sc = 0.0;
    for (const auto &row : a) {
        for (double x : row) {
            sc = std::max(sc, std::abs(x));
        }
    }
    const double det = det3(a);
    if (!(sc > 0.0) || std::abs(det) < rel_tol * sc * sc * sc) {
        return std::nullopt;
    }
    std::array<double, 3> x{};
    for (std::size_t col = 0; col < 3; ++col) {
        auto m = a;
        for (std::size_t row = 0; row < 3; ++row) {
            m[row][col] = b[row];
        }
        x[col] = det3(m) / det;
    }
    return x;
}

} // namespace squeezelab
