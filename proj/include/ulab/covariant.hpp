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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ulab/grid.hpp"
#include "ulab/kernels.hpp"
#include "ulab/report.hpp"
#include "ulab/states.hpp"
#include "ulab/stats.hpp"

namespace ulab {

/// A confidence measure used to smear a sharp observable, with its moments
/// cached at construction.
struct SmearingMeasure {
    ProbabilityDensity density;
    double first_moment = 0.0;
    double variance = 0.0;
    double abs_first_moment = 0.0;

    static SmearingMeasure from(ProbabilityDensity d);
};

/// prob * m: discrete linear convolution. The result lives on the grid
/// starting at dist.start + m.start with the shared spacing.
ProbabilityDensity smear(const ProbabilityDensity &dist, const SmearingMeasure &m,
                         kernels::Backend backend = kernels::Backend::openmp);

/// Covariant phase-space observable generated by the operator T; mu and nu are
/// the position and momentum densities of Pi T Pi*.
struct CovariantObservable {
    DensityMatrix T;
    SmearingMeasure mu;
    SmearingMeasure nu;
};

CovariantObservable gt_from_T(const DensityMatrix &T);

/// Density on a q x p lattice, row-major in q.
struct PhaseSpaceDensity {
    double q0 = 0.0;
    double dq = 1.0;
    std::size_t nq = 0;
    double p0 = 0.0;
    double dp = 1.0;
    std::size_t np = 0;
    std::vector<double> weights;

    [[nodiscard]] double at(std::size_t i, std::size_t k) const { return weights[i * np + k]; }
    [[nodiscard]] double mass() const;
    [[nodiscard]] ProbabilityDensity marginal_q() const;
    [[nodiscard]] ProbabilityDensity marginal_p() const;
};

constexpr std::size_t max_husimi_rank = 8;

/// Distribution of G^T in the state psi on the lattice q = x_{s}, s a multiple
/// of `stride`, and the full momentum grid.
PhaseSpaceDensity husimi(const WaveFunction &psi, const CovariantObservable &G, std::size_t stride = 1,
                         kernels::Backend backend = kernels::Backend::openmp);

struct MarginalMeasures {
    double noise = 0.0;          // intrinsic noise Delta(mu)^2
    double resolution = 0.0;     // W_eps(mu)
    double standard_error = 0.0; // sqrt(mu[1]^2 + Delta(mu)^2)
    double distance = 0.0;       // int |q| dmu
    double error_bar_lower = 0.0; // W_eps of the sharp distribution in T
};

struct CovariantReport {
    double eps1 = 0.0;
    double eps2 = 0.0;
    MarginalMeasures q;
    MarginalMeasures p;
    std::vector<BoundCheck> checks;
    /// Conjectured relations: evaluated and reported, never enforced.
    std::vector<BoundCheck> conjectures;
};

constexpr double werner_constant = 0.3047;

CovariantReport inaccuracy_measures(const CovariantObservable &G, double eps1, double eps2);

struct CovariantStateReport {
    double delta_q = 0.0; // spread of the smeared position marginal
    double delta_p = 0.0;
    /// same spreads from variance addition Delta(Q,psi)^2 + Delta(mu)^2
    double delta_q_added = 0.0;
    double delta_p_added = 0.0;
    BoundCheck check;
};

CovariantStateReport check_covariant_state_ur(const WaveFunction &psi, const CovariantObservable &G);

/// An observable seen as a map from states to outcome densities along one axis.
struct Channel {
    GridSpec grid;
    Observable axis = Observable::Q;
    std::function<ProbabilityDensity(const WaveFunction &)> output;
};

Channel sharp_channel(const GridSpec &grid, Observable axis);
Channel smeared_channel(const GridSpec &grid, Observable axis, const SmearingMeasure &m);

struct CalibrationResult {
    double width = 0.0; // W_{eps,delta}
    double epsilon = 0.0;
    double delta = 0.0;
    std::size_t states = 0;
    double worst_center = 0.0;
};

/// Smallest w such that every tested input localized in an interval of
/// width delta around x yields output mass >= 1 - eps in [x - w/2, x + w/2].
/// Inputs are the full box and two narrow boxes flush with its edges, on a
/// lattice of centres spanning the middle of the window.
CalibrationResult error_bar_calibrate(const Channel &channel, double eps, double delta);

struct ErrorBarReport {
    CalibrationResult q;
    CalibrationResult p;
    BoundCheck check;
};

ErrorBarReport covariant_error_bars(const CovariantObservable &G, double eps1, double eps2, double delta_q,
                                    double delta_p);

/// Lower estimate of the Werner distance between a channel and the sharp
/// observable on the same axis: tent functions max(0, r - |x - c|) against
/// the supplied input states.
double werner_distance_lower_bound(const Channel &channel, const std::vector<WaveFunction> &inputs,
                                   const std::vector<double> &radii);

struct WernerSearchOptions {
    int basis_size = 8;
    int budget = 5000;
    int starts = 4;
    std::uint64_t seed = 1;
    kernels::Backend backend = kernels::Backend::openmp;
};

struct WernerLogEntry {
    int evaluation = 0;
    int start = 0;
    double value = 0.0;
    double best = 0.0;
};

struct WernerSearchResult {
    double c_est = 0.0;
    /// Oscillator-basis coefficients of the optimal state, unit norm.
    std::vector<double> coefficients;
    double excited_mass = 0.0;
    int evaluations = 0;
    int best_start = 0;
    bool converged = false;
    std::vector<WernerLogEntry> log;
};

/// (int |q| |phi|^2)(int |p| |phi^|^2) / hbar for phi = sum_n c_n h_n.
double werner_product(const std::vector<double> &coefficients);

/// Minimizes the distance product over real superpositions of the first
/// basis_size oscillator eigenfunctions.
WernerSearchResult werner_constant_search(const WernerSearchOptions &opts);

/// sum_n c_n h_n on the grid, with the oscillator length sqrt(hbar).
WaveFunction werner_state(const GridSpec &grid, const std::vector<double> &coefficients);

/// Piecewise-linear strictly increasing map given by a table; outside the
/// table it continues with the offset at the nearer end, so map(x) - x stays
/// bounded.
class MonotoneMap {
  public:
    MonotoneMap(std::vector<double> xs, std::vector<double> ys);
    static MonotoneMap identity();
    static MonotoneMap tabulate(const std::function<double(double)> &f, double lo, double hi, std::size_t n);
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double inverse(double y) const;

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// Distribution of gamma(X) for X ~ d, resampled on d's grid.
ProbabilityDensity warp_density(const ProbabilityDensity &d, const MonotoneMap &gamma);

struct WarpOptions {
    double eps = 0.05;
    double delta_q = 0.1;
    double delta_p = 0.1;
    double shift = 1.0; // test translation in position, rounded to whole bins
};

struct WarpReport {
    ProbabilityDensity marginal_q;
    ProbabilityDensity marginal_p;
    CalibrationResult error_bar_q;
    CalibrationResult error_bar_p;
    CalibrationResult plain_error_bar_q;
    CalibrationResult plain_error_bar_p;
    double covariance_defect = 0.0;
    bool covariant = false;
};

constexpr double covariance_defect_threshold = 1e-3;

WarpReport warp_observable(const WaveFunction &psi, const CovariantObservable &G, const MonotoneMap &gamma1,
                           const MonotoneMap &gamma2, const WarpOptions &opts = {});

} // namespace ulab
