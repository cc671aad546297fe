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

#include <array>
#include <optional>
#include <vector>

#include "ulab/covariant.hpp"
#include "ulab/grid.hpp"
#include "ulab/kernels.hpp"
#include "ulab/report.hpp"

namespace ulab {

/// Couplings of U^(gamma); gamma = 0 is the plain two-probe coupling.
struct AKParams {
    double lambda = 1.0;
    double kappa = 1.0;
    double gamma = 0.0;
};

/// Object (axis 0) x probe 1 (axis 1) x probe 2 (axis 2), row-major, all
/// axes in the position representation.
struct TriState {
    std::array<GridSpec, 3> grids;
    std::vector<cplx> amplitudes;

    [[nodiscard]] std::array<std::size_t, 3> dims() const {
        return {grids[0].n_points, grids[1].n_points, grids[2].n_points};
    }
    [[nodiscard]] double norm() const;
};

constexpr std::size_t max_ak_axis_points = 64;

/// Applies the three BCH factors of U^(gamma) to psi (x) Psi1 (x) Psi2. Probes
/// must have zero position and momentum means.
TriState ak_evolve(const WaveFunction &psi, const WaveFunction &probe1, const WaveFunction &probe2,
                   const AKParams &params, kernels::Backend backend = kernels::Backend::openmp);

/// Joint density of (Q1/lambda, P2/kappa) in the evolved state.
PhaseSpaceDensity ak_joint_distribution(const TriState &final_state, const AKParams &params,
                                        kernels::Backend backend = kernels::Backend::openmp);

struct AKAnalytic {
    AKParams params;
    double var_q1 = 0.0; // Delta(Q1, Psi1)^2
    double var_p1 = 0.0;
    double var_q2 = 0.0;
    double var_p2 = 0.0;
    double mu_var = 0.0; // Delta(mu_gamma)^2
    double nu_var = 0.0;
    double product = 0.0;
    double quantum = 0.0;     // probe-intrinsic part of the product
    double disturbance = 0.0; // mutual-disturbance part
    double x = 0.0;
    std::vector<BoundCheck> checks;
};

/// Analytic smearing variances from the probe moments. The split into the
/// quantum and disturbance parts and their bounds are reported for gamma = 0,
/// where they are established; the variance-product bound holds for all gamma,
/// and gamma = -1 adds the undisturbed-momentum relation.
AKAnalytic ak_analytic_variances(const AKParams &params, const WaveFunction &probe1, const WaveFunction &probe2);

struct AKSimulation {
    double gamma = 0.0;
    double var_q = 0.0; // variance of the first marginal
    double var_p = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double expected_var_q = 0.0; // Delta(Q,psi)^2 + Delta(mu)^2
    double expected_var_p = 0.0;
    double rel_error_q = 0.0;
    double rel_error_p = 0.0;
    bool agrees = false;
};

constexpr double ak_simulation_tolerance = 0.03;

struct AKGammaStudy {
    std::vector<AKAnalytic> rows;
    std::vector<AKSimulation> simulations;
};

/// Analytic rows for each gamma in [-2, 2]; simulations at the members of
/// {-1, 0, 1} present in the sweep when `simulate` is set.
AKGammaStudy ak_gamma_study(const std::vector<double> &gammas, const AKParams &params, const WaveFunction &psi,
                            const WaveFunction &probe1, const WaveFunction &probe2, bool simulate,
                            kernels::Backend backend = kernels::Backend::openmp);

AKSimulation ak_simulate(const WaveFunction &psi, const WaveFunction &probe1, const WaveFunction &probe2,
                         const AKParams &params, kernels::Backend backend = kernels::Backend::openmp);

} // namespace ulab
