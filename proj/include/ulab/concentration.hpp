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

#include <Eigen/Dense>

#include <vector>

#include "ulab/grid.hpp"
#include "ulab/states.hpp"

namespace ulab {

/// Dense operator acting on amplitude vectors of `grid` (position basis).
struct OperatorMatrix {
    GridSpec grid;
    Eigen::MatrixXcd matrix;
    bool hermitian = false;
};

/// Indices k with coordinate start + k*step in [lo, hi).
std::vector<std::size_t> snapped_indices(double start, double step, std::size_t n, const Interval &iv);

/// Spectral projection of position onto a union of intervals (grid points in
/// [lo, hi) for each part). Throws degenerate-set error when nothing is hit.
OperatorMatrix projector_position(const GridSpec &grid, const std::vector<Interval> &set);

/// Spectral projection of momentum: the momentum-bin indicator conjugated by
/// the unitary grid transform.
OperatorMatrix projector_momentum(const GridSpec &grid, const Interval &y);

struct A0Result {
    double a0 = 0.0;
    /// trace of Q(X)P(Y)Q(X) summed from the matrix diagonal
    double trace = 0.0;
    /// |X||Y|/(2 pi hbar) for the snapped interval lengths
    double nominal_trace = 0.0;
    Interval x_cells;
    Interval y_cells;
};

/// Largest eigenvalue of Q(X)P(Y)Q(X).
A0Result largest_a0(const GridSpec &grid, const Interval &x, const Interval &y);

struct Localization {
    double value = 0.0;
    WaveFunction state;
    double prob_q = 0.0;
    double prob_p = 0.0;
};

/// Top eigenpair of Q(X) + P(Y): the state maximizing prob^Q(X) + prob^P(Y).
Localization optimal_localization(const GridSpec &grid, const Interval &x, const Interval &y);

struct MinAreaResult {
    double area = 0.0;
    double area_over_h = 0.0; // area / (2 pi hbar)
    double a0 = 0.0;
    double bound = 0.0;       // 2 pi hbar (1 - e1 - e2)^2
    int iterations = 0;
};

/// Smallest cell area |X||Y| with sqrt(a0) >= 1 - e1 - e2, by bisection on the
/// area starting from the bracket [0.1, 50] * 2 pi hbar. X and Y are centred
/// and take the same fraction of the position and momentum windows.
MinAreaResult min_area_for_confidence(const GridSpec &grid, double eps1, double eps2);

/// Centred intervals with |X||Y| = area, aspect matched to the windows.
std::pair<Interval, Interval> cell_for_area(const GridSpec &grid, double area);

/// Indicator of a periodic set: the listed sub-intervals of [0, period),
/// repeated with the given period.
struct PeriodicSetFunction {
    double period = 1.0;
    std::vector<Interval> cell;

    [[nodiscard]] bool contains(double x) const;
    void validate() const;
};

enum class CommutationVerdict { commute, noncommute, inconclusive };

struct CommutatorResult {
    double norm = 0.0;
    double ratio = 0.0; // 2 pi hbar / (a b)
    bool commute_predicted = false;
    CommutationVerdict verdict = CommutationVerdict::inconclusive;
};

constexpr double commute_threshold = 1e-6;
constexpr double noncommute_threshold = 0.05;

/// Max-norm of [Q^g, P^h] for indicator functions of periodic sets. The grid
/// must be commensurate with both periods and span at least 8 of each.
CommutatorResult periodic_commutator(const GridSpec &grid, const PeriodicSetFunction &g,
                                     const PeriodicSetFunction &h);

} // namespace ulab
