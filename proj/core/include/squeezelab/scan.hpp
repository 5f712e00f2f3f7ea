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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace squeezelab {

enum class PhaseSampling {
    Equispaced, ///< psi_j = n pi j / N
    Uniform,    ///< i.i.d. uniform over [0, n pi)
};

/// Geometry of one local-oscillator phase scan.
struct ScanConfig {
    std::size_t n_samples = 900;
    /// The scan covers [0, phase_periods * pi).
    unsigned phase_periods = 2;
    PhaseSampling sampling = PhaseSampling::Equispaced;

    void validate() const;
};

/// Equispaced phases for `config` (ignores config.sampling).
std::vector<double> equispaced_phases(const ScanConfig &config);

/// Paired LO phases and quadrature samples from one scan.
struct HomodyneScan {
    std::vector<double> phases;
    std::vector<double> samples;
    ScanConfig config;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    /// Throws std::invalid_argument unless phases and samples have equal,
    /// non-zero length.
    void validate() const;
};

/// mu paired (q1, p2) samples from double-homodyne detection.
struct DhdBatch {
    std::vector<double> q1;
    std::vector<double> p2;

    [[nodiscard]] std::size_t mu() const { return q1.size(); }
    void validate() const;
};

} // namespace squeezelab
