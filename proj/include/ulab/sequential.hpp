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

#include <utility>
#include <vector>

#include "ulab/covariant.hpp"
#include "ulab/grid.hpp"
#include "ulab/report.hpp"
#include "ulab/stats.hpp"

namespace ulab {

/// Standard-model position instrument: (K_q psi)(x) = sqrt(lambda) Psi_p(lambda (q - x)) psi(x)
/// with outcomes q on the object grid. kernel[m] stores sqrt(lambda) Psi_p(lambda x_m)
/// on the (symmetric) object grid.
struct SequentialInstrument {
    WaveFunction probe;
    double lambda = 1.0;
    GridSpec grid;
    std::vector<cplx> kernel;
    /// Outcome bins as index ranges [bin_edges[b], bin_edges[b+1]).
    std::vector<std::size_t> bin_edges;
};

constexpr double kraus_tolerance = 1e-6;

/// Samples the scaled probe on the object grid by band-limited interpolation.
/// Throws probe-validity error when the Kraus family misses completeness by
/// more than 1e-6 (probe too spiky for the grid, or cut off by the window).
SequentialInstrument build_instrument(const WaveFunction &probe, double lambda, const GridSpec &object_grid,
                                      std::size_t bin_cells = 1);

/// max_x | sum_q |K_q(x)|^2 dq - 1 |.
double kraus_completeness_error(const SequentialInstrument &I);

/// Outcome density q -> ||K_q psi||^2, computed directly from the Kraus family.
ProbabilityDensity outcome_density(const SequentialInstrument &I, const WaveFunction &psi);
std::vector<double> bin_probabilities(const SequentialInstrument &I, const WaveFunction &psi);

/// mu(y) = lambda |Psi_p(lambda y)|^2, the smearing of the first marginal.
SmearingMeasure measured_mu(const SequentialInstrument &I);
/// nu(p) = (1/lambda) |Psi_p^(-p/lambda)|^2, the smearing of the second marginal.
SmearingMeasure measured_nu(const SequentialInstrument &I);

struct Posterior {
    WaveFunction state;
    double density = 0.0;
};

/// Normalized K_q psi and the outcome density at q; q must be a grid point.
Posterior posterior_state(const SequentialInstrument &I, const WaveFunction &psi, double q);

/// Joint density of (position outcome, subsequent sharp momentum).
PhaseSpaceDensity sequential_joint(const SequentialInstrument &I, const WaveFunction &psi,
                                   kernels::Backend backend = kernels::Backend::openmp);

/// phi(y) = conj(Psi^(lambda)(-y)): the covariant observable generated by
/// |phi><phi| has the same joint density as the instrument.
WaveFunction davies_state(const SequentialInstrument &I);

struct DisturbanceOptions {
    double eps1 = 0.05;
    double eps2 = 0.05;
    double delta_cells = 8.0; // calibration box width in grid cells
};

struct DisturbanceReport {
    ProbabilityDensity prior_momentum;
    ProbabilityDensity post_momentum;
    SmearingMeasure mu;
    SmearingMeasure nu;
    double m1_defect = 0.0; // TV(outcome density, prob^Q * mu)
    double m2_defect = 0.0; // TV(post momentum, prob^P * nu)
    double standard_error_q = 0.0;
    double standard_error_p = 0.0;
    double distance_q = 0.0;
    double distance_p = 0.0;
    CalibrationResult error_bar_q;
    CalibrationResult error_bar_p;
    std::vector<BoundCheck> checks;
    std::vector<BoundCheck> conjectures;
};

DisturbanceReport disturbance_report(const SequentialInstrument &I, const WaveFunction &psi,
                                     const DisturbanceOptions &opts = {});

} // namespace ulab
