// Copyright 2026 The ulab Authors
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
#include <vector>

#include "ulab/grid.hpp"

namespace ulab {

enum class DensityKind { position, momentum, generic };

/// Nonnegative density sampled on a uniform monotone grid
/// coord(i) = start + i*spacing; weights integrate (times spacing) to one.
struct ProbabilityDensity {
    double start = 0.0;
    double spacing = 1.0;
    std::vector<double> weights;
    DensityKind kind = DensityKind::generic;

    [[nodiscard]] std::size_t size() const { return weights.size(); }
    [[nodiscard]] double coord(std::size_t i) const {
        return start + spacing * static_cast<double>(i);
    }
    [[nodiscard]] double mass() const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;
    [[nodiscard]] double stddev() const;
    [[nodiscard]] double abs_moment() const;
    /// Probability of the closed interval [lo, hi] (grid points inside it).
    [[nodiscard]] double probability(double lo, double hi) const;

    /// Throws unless weights >= 0 and the mass is one within `tol`.
    void validate(double tol = 1e-9) const;
};

ProbabilityDensity position_density(const WaveFunction &psi);
ProbabilityDensity momentum_density(const WaveFunction &psi);

/// Half the L1 distance. Grids must share the spacing and be offset by a whole
/// number of bins; samples missing from one grid count as zero.
double total_variation(const ProbabilityDensity &a, const ProbabilityDensity &b);

/// Density translated by k bins (coordinates move, weights do not).
ProbabilityDensity shifted_bins(const ProbabilityDensity &d, long long k);

enum class Observable { Q, P };

/// Standard deviation of position or momentum, computed in the representation
/// where the observable is diagonal. Warns when more than 1e-6 of the mass sits
/// in the outer 5% of the window.
double stddev(const WaveFunction &psi, Observable which);
double expectation(const WaveFunction &psi, Observable which);

struct WidthReport {
    double epsilon = 0.0;
    double width = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double covered = 0.0;
};

/// Shortest bin-aligned interval holding probability >= 1 - epsilon.
/// Cells are [coord - spacing/2, coord + spacing/2]; width is a whole number
/// of cells, so the reported value carries a +-2 spacing tolerance.
WidthReport overall_width(const ProbabilityDensity &d, double epsilon);

struct PrepUrReport {
    double delta_q = 0.0;
    double delta_p = 0.0;
    double product = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool pass = false;
    /// hbar / (2 delta_q): the momentum spread any state this narrow must exceed.
    double implied_delta_p_bound = 0.0;
};

PrepUrReport check_preparation_ur(const WaveFunction &psi);

double overall_width_bound(double hbar, double eps1, double eps2);
double uffink_bound(double hbar, double eps1, double eps2);

struct WidthUrReport {
    WidthReport position;
    WidthReport momentum;
    double product = 0.0;
    double bound = 0.0;
    double uffink = 0.0;
    bool pass_bound = false;
    bool pass_uffink = false;
};

/// Requires eps1, eps2 in (0, 1/2).
WidthUrReport check_overall_width_ur(const WaveFunction &psi, double eps1, double eps2);

/// Gaussian eta_{a,b} with the requested spreads; throws uncertainty-violation
/// when delta_q * delta_p < hbar / 2.
WaveFunction target_spreads(const GridSpec &grid, double delta_q, double delta_p);

} // namespace ulab
