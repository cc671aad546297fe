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

#include "ulab/arthurs_kelly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ulab/error.hpp"
#include "ulab/stats.hpp"

namespace ulab {

double TriState::norm() const {
    double s = 0.0;
    for (const auto &a : amplitudes) {
        s += std::norm(a);
    }
    return std::sqrt(s * grids[0].dx * grids[1].dx * grids[2].dx);
}

namespace {

void require_centred(const WaveFunction &probe, const char *name) {
    const double mq = expectation(probe, Observable::Q);
    const double mp = expectation(probe, Observable::P);
    const double sq = position_density(probe).stddev();
    const double sp = momentum_density(probe).stddev();
    require(std::abs(mq) <= 1e-6 * std::max(1.0, sq) && std::abs(mp) <= 1e-6 * std::max(1.0, sp),
            ErrorKind::parameter, std::string(name) + " must have zero position and momentum means");
}

// Multiplies every tensor entry by exp(i * phase(c_a, c_b)) where c_a, c_b are
// the coordinates along axes a and b in their current representation.
template <class F>
void apply_phase(std::vector<cplx> &t, const std::array<std::size_t, 3> &dims, F &&phase_of_index) {
    const auto n0 = static_cast<long long>(dims[0]);
    const std::size_t n1 = dims[1];
    const std::size_t n2 = dims[2];
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n0; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < n1; ++j) {
            for (std::size_t k = 0; k < n2; ++k) {
                t[(iu * n1 + j) * n2 + k] *= std::polar(1.0, phase_of_index(iu, j, k));
            }
        }
    }
}

void warn_edges(const TriState &s) {
    const auto d = s.dims();
    for (std::size_t axis = 0; axis < 3; ++axis) {
        std::vector<double> m(d[axis], 0.0);
        for (std::size_t i = 0; i < d[0]; ++i) {
            for (std::size_t j = 0; j < d[1]; ++j) {
                for (std::size_t k = 0; k < d[2]; ++k) {
                    const std::array<std::size_t, 3> idx{i, j, k};
                    m[idx[axis]] += std::norm(s.amplitudes[(i * d[1] + j) * d[2] + k]);
                }
            }
        }
        const double total = std::accumulate(m.begin(), m.end(), 0.0);
        const auto edge = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(d[axis])));
        double out = 0.0;
        for (std::size_t i = 0; i < d[axis]; ++i) {
            if (i < edge || i >= d[axis] - edge) {
                out += m[i];
            }
        }
        if (total > 0.0 && out / total > boundary_mass_limit) {
            warn(WarningKind::boundary_aliasing,
                 "three-body state reaches the window edge on axis " + std::to_string(axis));
        }
    }
}

} // namespace

TriState ak_evolve(const WaveFunction &psi, const WaveFunction &probe1, const WaveFunction &probe2,
                   const AKParams &params, kernels::Backend backend) {
    require(params.lambda >= 0.0 && params.kappa >= 0.0, ErrorKind::parameter, "couplings must be nonnegative");
    require_centred(probe1, "probe 1");
    require_centred(probe2, "probe 2");
    TriState s;
    s.grids = {psi.grid(), probe1.grid(), probe2.grid()};
    for (const auto &g : s.grids) {
        g.validate();
        require(g.n_points <= max_ak_axis_points, ErrorKind::cost, "three-body simulation is limited to 64 points per axis");
    }
    const double hbar = s.grids[0].hbar;
    require(s.grids[1].hbar == hbar && s.grids[2].hbar == hbar, ErrorKind::grid_mismatch,
            "all three systems must share hbar");
    const auto a = in_rep(psi, Rep::position);
    const auto b = in_rep(probe1, Rep::position);
    const auto c = in_rep(probe2, Rep::position);
    const auto dims = s.dims();
    s.amplitudes.resize(dims[0] * dims[1] * dims[2]);
    for (std::size_t i = 0; i < dims[0]; ++i) {
        for (std::size_t j = 0; j < dims[1]; ++j) {
            for (std::size_t k = 0; k < dims[2]; ++k) {
                s.amplitudes[(i * dims[1] + j) * dims[2] + k] =
                    a.amplitudes()[i] * b.amplitudes()[j] * c.amplitudes()[k];
            }
        }
    }
    const auto &g = s.grids;
    const double lam = params.lambda;
    const double kap = params.kappa;
    auto &t = s.amplitudes;
    using kernels::Direction;

    // exp(i kappa P Q2 / hbar): diagonal in (p, x2)
    kernels::transform_axis(t, dims, 0, g[0], Direction::to_momentum, backend);
    apply_phase(t, dims, [&](std::size_t i, std::size_t, std::size_t k) { return kap * g[0].p(i) * g[2].x(k) / hbar; });
    kernels::transform_axis(t, dims, 0, g[0], Direction::to_position, backend);

    // exp(-i lambda Q P1 / hbar): diagonal in (x, p1)
    kernels::transform_axis(t, dims, 1, g[1], Direction::to_momentum, backend);
    apply_phase(t, dims, [&](std::size_t i, std::size_t j, std::size_t) { return -lam * g[0].x(i) * g[1].p(j) / hbar; });

    // exp(-(gamma + 1) i lambda kappa P1 Q2 / (2 hbar)): diagonal in (p1, x2)
    const double c3 = -(params.gamma + 1.0) * lam * kap / (2.0 * hbar);
    apply_phase(t, dims, [&](std::size_t, std::size_t j, std::size_t k) { return c3 * g[1].p(j) * g[2].x(k); });
    kernels::transform_axis(t, dims, 1, g[1], Direction::to_position, backend);

    const double nrm = s.norm();
    require(std::abs(nrm - 1.0) <= 1e-8, ErrorKind::numerical, "evolution lost unitarity");
    warn_edges(s);
    return s;
}

PhaseSpaceDensity ak_joint_distribution(const TriState &final_state, const AKParams &params,
                                        kernels::Backend backend) {
    require(params.lambda > 0.0 && params.kappa > 0.0, ErrorKind::parameter,
            "readout rescaling needs positive couplings");
    const auto dims = final_state.dims();
    const auto &g = final_state.grids;
    auto t = final_state.amplitudes;
    kernels::transform_axis(t, dims, 2, g[2], kernels::Direction::to_momentum, backend);
    PhaseSpaceDensity h;
    h.nq = dims[1];
    h.np = dims[2];
    h.q0 = g[1].x_min / params.lambda;
    h.dq = g[1].dx / params.lambda;
    h.p0 = g[2].p_min() / params.kappa;
    h.dp = g[2].dp() / params.kappa;
    h.weights.assign(h.nq * h.np, 0.0);
    const double scale = g[0].dx * params.lambda * params.kappa;
    for (std::size_t j = 0; j < dims[1]; ++j) {
        for (std::size_t k = 0; k < dims[2]; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < dims[0]; ++i) {
                s += std::norm(t[(i * dims[1] + j) * dims[2] + k]);
            }
            h.weights[j * h.np + k] = s * scale;
        }
    }
    return h;
}

AKAnalytic ak_analytic_variances(const AKParams &params, const WaveFunction &probe1, const WaveFunction &probe2) {
    require(params.lambda > 0.0 && params.kappa > 0.0, ErrorKind::parameter, "couplings must be positive");
    const double hbar = probe1.grid().hbar;
    AKAnalytic r;
    r.params = params;
    r.var_q1 = std::pow(stddev(probe1, Observable::Q), 2);
    r.var_p1 = std::pow(stddev(probe1, Observable::P), 2);
    r.var_q2 = std::pow(stddev(probe2, Observable::Q), 2);
    r.var_p2 = std::pow(stddev(probe2, Observable::P), 2);
    const double lam = params.lambda;
    const double kap = params.kappa;
    const double gm = params.gamma - 1.0;
    const double gp = params.gamma + 1.0;
    const double a = r.var_q1 / (lam * lam);
    const double b = kap * kap * r.var_q2 / 4.0;
    const double c = r.var_p2 / (kap * kap);
    const double d = lam * lam * r.var_p1 / 4.0;
    r.mu_var = a + gm * gm * b;
    r.nu_var = c + gp * gp * d;
    r.product = r.mu_var * r.nu_var;
    r.quantum = gp * gp * a * d + gm * gm * b * c;
    r.disturbance = a * c + gm * gm * gp * gp * b * d;
    r.x = 16.0 / std::pow(lam * kap * hbar, 2) * r.var_q1 * r.var_p2;
    const double h2 = hbar * hbar;
    if (params.gamma == 0.0) {
        r.checks.push_back(make_check("probe quantum term", "AK-QUANTUM", r.quantum, h2 / 8.0));
        r.checks.push_back(make_check("mutual disturbance term", "AK-DISTURBANCE", r.disturbance, h2 / 8.0));
        r.checks.push_back(make_check("mutual disturbance term vs x", "AK-DISTURBANCE", r.disturbance,
                                      h2 / 16.0 * (r.x + 1.0 / r.x)));
    }
    r.checks.push_back(make_check("smearing variance product", "AK-NOISE", r.product, h2 / 4.0));
    if (params.gamma == -1.0) {
        r.checks.push_back(make_check("undisturbed momentum x position disturbance", "AK-SEQUENTIAL",
                                      (r.var_p2 / (kap * kap)) * (kap * kap * r.var_q2), h2 / 4.0));
    }
    return r;
}

AKSimulation ak_simulate(const WaveFunction &psi, const WaveFunction &probe1, const WaveFunction &probe2,
                         const AKParams &params, kernels::Backend backend) {
    const auto fin = ak_evolve(psi, probe1, probe2, params, backend);
    const auto joint = ak_joint_distribution(fin, params, backend);
    const auto mq = joint.marginal_q();
    const auto mp = joint.marginal_p();
    const auto an = ak_analytic_variances(params, probe1, probe2);
    AKSimulation s;
    s.gamma = params.gamma;
    s.var_q = mq.variance();
    s.var_p = mp.variance();
    s.mean_q = mq.mean();
    s.mean_p = mp.mean();
    s.expected_var_q = position_density(psi).variance() + an.mu_var;
    s.expected_var_p = momentum_density(psi).variance() + an.nu_var;
    s.rel_error_q = std::abs(s.var_q - s.expected_var_q) / s.expected_var_q;
    s.rel_error_p = std::abs(s.var_p - s.expected_var_p) / s.expected_var_p;
    s.agrees = s.rel_error_q < ak_simulation_tolerance && s.rel_error_p < ak_simulation_tolerance;
    return s;
}

AKGammaStudy ak_gamma_study(const std::vector<double> &gammas, const AKParams &params, const WaveFunction &psi,
                            const WaveFunction &probe1, const WaveFunction &probe2, bool simulate,
                            kernels::Backend backend) {
    AKGammaStudy st;
    for (double g : gammas) {
        require(g >= -2.0 && g <= 2.0, ErrorKind::parameter, "gamma sweep must stay within [-2, 2]");
        AKParams p = params;
        p.gamma = g;
        st.rows.push_back(ak_analytic_variances(p, probe1, probe2));
        if (simulate && (g == -1.0 || g == 0.0 || g == 1.0)) {
            st.simulations.push_back(ak_simulate(psi, probe1, probe2, p, backend));
        }
    }
    return st;
}

} // namespace ulab
