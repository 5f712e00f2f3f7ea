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
 * Small symmetric matrices used throughout the library: 2x2 quadrature
 * covariance matrices and 3x3 matrices indexed by the parameter order
 * (s, kappa, phi_s).
 */

#pragma once

#include <array>
#include <cstddef>
#include <optional>

namespace squeezelab {

/// Symmetric 2x2 matrix over the (x, p) quadratures, shot-noise units.
struct SymMatrix2 {
    double xx = 0.0;
    double xp = 0.0;
    double pp = 0.0;

    static SymMatrix2 identity() { return {1.0, 0.0, 1.0}; }

    [[nodiscard]] double trace() const { return xx + pp; }
    [[nodiscard]] double determinant() const { return xx * pp - xp * xp; }

    SymMatrix2 &operator+=(const SymMatrix2 &o) {
        xx += o.xx;
        xp += o.xp;
        pp += o.pp;
        return *this;
    }
    SymMatrix2 &operator-=(const SymMatrix2 &o) {
        xx -= o.xx;
        xp -= o.xp;
        pp -= o.pp;
        return *this;
    }
    friend SymMatrix2 operator+(SymMatrix2 a, const SymMatrix2 &b) { return a += b; }
    friend SymMatrix2 operator-(SymMatrix2 a, const SymMatrix2 &b) { return a -= b; }
    friend bool operator==(const SymMatrix2 &, const SymMatrix2 &) = default;
};

/// Eigen-decomposition of a symmetric 2x2 matrix.
struct Eigen2 {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Angle of the eigenvector belonging to lambda_min, in [0, pi).
    double angle_min = 0.0;
    /// Eigenvalues coincide to relative precision; angle_min is then 0.
    bool degenerate = false;
};

Eigen2 eigen_decompose(const SymMatrix2 &m);

/// Symmetric 3x3 matrix. Row/column order is (s, kappa, phi_s).
class SymMatrix3 {
  public:
    SymMatrix3() = default;

    static SymMatrix3 diagonal(double d0, double d1, double d2);
    static SymMatrix3 zero() { return {}; }

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        return v_[index(i, j)];
    }
    void set(std::size_t i, std::size_t j, double value) { v_[index(i, j)] = value; }
    void add(std::size_t i, std::size_t j, double value) { v_[index(i, j)] += value; }

    [[nodiscard]] std::array<double, 3> diag() const { return {v_[0], v_[3], v_[5]}; }
    [[nodiscard]] double trace() const { return v_[0] + v_[3] + v_[5]; }
    [[nodiscard]] double determinant() const;
    /// Largest absolute entry.
    [[nodiscard]] double scale() const;

    /// Adjugate inverse. Returns nullopt when |det| < rel_tol * scale()^3.
    [[nodiscard]] std::optional<SymMatrix3> inverse(double rel_tol = 1e-12) const;

    /// Eigenvalues in ascending order (closed-form trigonometric solution).
    [[nodiscard]] std::array<double, 3> eigenvalues() const;
    [[nodiscard]] bool is_psd(double rel_tol = 1e-10) const;

    SymMatrix3 &operator+=(const SymMatrix3 &o);
    SymMatrix3 &operator-=(const SymMatrix3 &o);
    SymMatrix3 &operator*=(double f);
    friend SymMatrix3 operator+(SymMatrix3 a, const SymMatrix3 &b) { return a += b; }
    friend SymMatrix3 operator-(SymMatrix3 a, const SymMatrix3 &b) { return a -= b; }
    friend SymMatrix3 operator*(SymMatrix3 a, double f) { return a *= f; }
    friend SymMatrix3 operator*(double f, SymMatrix3 a) { return a *= f; }
    friend bool operator==(const SymMatrix3 &, const SymMatrix3 &) = default;

  private:
    static constexpr std::size_t index(std::size_t i, std::size_t j) {
        // packed upper triangle: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
        if (i > j) {
            const std::size_t t = i;
            i = j;
            j = t;
        }
        return i == 0 ? j : (i == 1 ? 2 + j : 5);
    }
    std::array<double, 6> v_{};
};

/// Solve a general (not necessarily symmetric) 3x3 system by Cramer's rule.
/// Returns nullopt when the determinant is negligible relative to the entries.
std::optional<std::array<double, 3>>
solve3(const std::array<std::array<double, 3>, 3> &a, const std::array<double, 3> &b,
       double rel_tol = 1e-12);

} // namespace squeezelab
