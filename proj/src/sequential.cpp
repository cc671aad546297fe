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

#include "ulab/sequential.hpp"

#include <algorithm>
#include <cmath>

#include "ulab/error.hpp"

namespace ulab {

namespace {

// K_{q_s}(x_j) on the periodic symmetric grid.
cplx kraus(const SequentialInstrument &I, std::size_t s, std::size_t j) {
    const std::size_t n = I.grid.n_points;
    return I.kernel[(s + n + n / 2 - j) % n];
}

} // namespace

SequentialInstrument build_instrument(const WaveFunction &probe, double lambda, const GridSpec &object_grid,
                                      std::size_t bin_cells) {
    object_grid.validate();
    require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::parameter, "coupling must be positive");
    require(object_grid.is_symmetric() && object_grid.n_points % 2 == 0, ErrorKind::grid_symmetry,
            "instrument needs a symmetric object grid with an even point count");
    require(bin_cells >= 1, ErrorKind::parameter, "bins need at least one cell");
    SequentialInstrument I;
    I.probe = in_rep(probe, Rep::position);
    I.lambda = lambda;
    I.grid = object_grid;
    const std::size_t n = object_grid.n_points;
    I.kernel.resize(n);
    const double root = std::sqrt(lambda);
    for (std::size_t m = 0; m < n; ++m) {
        I.kernel[m] = root * interpolate(I.probe, lambda * object_grid.x(m));
    }
    for (std::size_t e = 0; e < n; e += bin_cells) {
        I.bin_edges.push_back(e);
    }
    I.bin_edges.push_back(n);
    const double err = kraus_completeness_error(I);
    require(err <= kraus_tolerance, ErrorKind::probe_validity,
            "scaled probe is not resolved by the object grid (Kraus completeness off by " + std::to_string(err) + ")");
    return I;
}

double kraus_completeness_error(const SequentialInstrument &I) {
    const std::size_t n = I.grid.n_points;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            s += std::norm(kraus(I, q, j));
        }
        worst = std::max(worst, std::abs(s * I.grid.dx - 1.0));
    }
    return worst;
}

ProbabilityDensity outcome_density(const SequentialInstrument &I, const WaveFunction &psi) {
    require(psi.grid().same_as(I.grid), ErrorKind::grid_mismatch, "state and instrument grids differ");
    const auto x = in_rep(psi, Rep::position);
    const std::size_t n = I.grid.n_points;
    ProbabilityDensity d;
    d.start = I.grid.x_min;
    d.spacing = I.grid.dx;
    d.weights.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += std::norm(kraus(I, s, j) * x.amplitudes()[j]);
        }
        d.weights[s] = acc * I.grid.dx;
    }
    return d;
}

std::vector<double> bin_probabilities(const SequentialInstrument &I, const WaveFunction &psi) {
    const auto d = outcome_density(I, psi);
    std::vector<double> out;
    for (std::size_t b = 0; b + 1 < I.bin_edges.size(); ++b) {
        double s = 0.0;
        for (std::size_t i = I.bin_edges[b]; i < I.bin_edges[b + 1]; ++i) {
            s += d.weights[i];
        }
        out.push_back(s * d.spacing);
    }
    return out;
}

SmearingMeasure measured_mu(const SequentialInstrument &I) {
    ProbabilityDensity d;
    d.start = I.grid.x_min;
    d.spacing = I.grid.dx;
    for (const auto &k : I.kernel) {
        d.weights.push_back(std::norm(k));
    }
    return SmearingMeasure::from(std::move(d));
}

SmearingMeasure measured_nu(const SequentialInstrument &I) {
    const auto scaled = to_momentum(WaveFunction::normalized(I.grid, I.kernel));
    const std::size_t n = I.grid.n_points;
    ProbabilityDensity d;
    d.start = I.grid.p_min();
    d.spacing = I.grid.dp();
    d.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        d.weights[k] = std::norm(scaled.amplitudes()[(n - k) % n]);
    }
    return SmearingMeasure::from(std::move(d));
}

Posterior posterior_state(const SequentialInstrument &I, const WaveFunction &psi, double q) {
    require(psi.grid().same_as(I.grid), ErrorKind::grid_mismatch, "state and instrument grids differ");
    const double sf = (q - I.grid.x_min) / I.grid.dx;
    const double sr = std::round(sf);
    require(std::abs(sf - sr) <= 1e-6 && sr >= 0.0 && sr < static_cast<double>(I.grid.n_points),
            ErrorKind::range, "outcome is not a grid point");
    const auto s = static_cast<std::size_t>(sr);
    const auto x = in_rep(psi, Rep::position);
    const std::size_t n = I.grid.n_points;
    std::vector<cplx> v(n);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = kraus(I, s, j) * x.amplitudes()[j];
        norm2 += std::norm(v[j]);
    }
    norm2 *= I.grid.dx;
    require(norm2 > 1e-300, ErrorKind::conditioning, "outcome has zero probability density");
    return Posterior{WaveFunction::normalized(I.grid, std::move(v)), norm2};
}

PhaseSpaceDensity sequential_joint(const SequentialInstrument &I, const WaveFunction &psi,
                                   kernels::Backend backend) {
    require(psi.grid().same_as(I.grid), ErrorKind::grid_mismatch, "state and instrument grids differ");
    const auto x = in_rep(psi, Rep::position);
    const std::size_t n = I.grid.n_points;
    // the windowed transform wants w(x_j - q); here w(y) = K(-y)
    std::vector<cplx> window(n);
    for (std::size_t i = 0; i < n; ++i) {
        window[i] = I.kernel[(n - i) % n];
    }
    std::vector<std::size_t> rows(n);
    for (std::size_t s = 0; s < n; ++s) {
        rows[s] = s;
    }
    PhaseSpaceDensity h;
    h.q0 = I.grid.x_min;
    h.dq = I.grid.dx;
    h.nq = n;
    h.p0 = I.grid.p_min();
    h.dp = I.grid.dp();
    h.np = n;
    h.weights = kernels::spectrogram(I.grid, window, x.amplitudes(), rows, backend);
    return h;
}

WaveFunction davies_state(const SequentialInstrument &I) {
    const std::size_t n = I.grid.n_points;
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::conj(I.kernel[(n - i) % n]);
    }
    return WaveFunction::normalized(I.grid, std::move(v));
}

DisturbanceReport disturbance_report(const SequentialInstrument &I, const WaveFunction &psi,
                                     const DisturbanceOptions &opts) {
    require(opts.eps1 > 0.0 && opts.eps1 < 0.5 && opts.eps2 > 0.0 && opts.eps2 < 0.5, ErrorKind::parameter,
            "epsilons must lie in (0, 1/2)");
    const double hbar = I.grid.hbar;
    DisturbanceReport r;
    r.mu = measured_mu(I);
    r.nu = measured_nu(I);
    r.prior_momentum = momentum_density(psi);
    const auto joint = sequential_joint(I, psi);
    r.post_momentum = joint.marginal_p();
    r.m1_defect = total_variation(outcome_density(I, psi), smear(position_density(psi), r.mu));
    r.m2_defect = total_variation(r.post_momentum, smear(r.prior_momentum, r.nu));

    r.standard_error_q = std::sqrt(r.mu.first_moment * r.mu.first_moment + r.mu.variance);
    r.standard_error_p = std::sqrt(r.nu.first_moment * r.nu.first_moment + r.nu.variance);
    r.distance_q = r.mu.abs_first_moment;
    r.distance_p = r.nu.abs_first_moment;
    r.error_bar_q = error_bar_calibrate(smeared_channel(I.grid, Observable::Q, r.mu), opts.eps1,
                                        opts.delta_cells * I.grid.dx);
    r.error_bar_p = error_bar_calibrate(smeared_channel(I.grid, Observable::P, r.nu), opts.eps2,
                                        opts.delta_cells * I.grid.dp());
    const double wbound = overall_width_bound(hbar, opts.eps1, opts.eps2);
    r.checks.push_back(make_check("inaccuracy x disturbance, standard error", "UR-STD-ERROR",
                                  r.standard_error_q * r.standard_error_p, hbar / 2.0));
    r.checks.push_back(make_check("inaccuracy x disturbance, distance", "UR-DISTANCE", r.distance_q * r.distance_p,
                                  werner_constant * hbar));
    r.checks.push_back(make_check("inaccuracy x disturbance, error bar", "UR-ERROR-BAR",
                                  r.error_bar_q.width * r.error_bar_p.width, wbound));
    r.conjectures.push_back(
        make_check("noise product vs hbar/2", "CONJ-NOISE-HALF", r.mu.variance * r.nu.variance, hbar / 2.0));
    r.conjectures.push_back(make_check("noise product vs hbar^2/4", "CONJ-NOISE-QUARTER",
                                       r.mu.variance * r.nu.variance, hbar * hbar / 4.0));
    r.conjectures.push_back(make_check("resolution width product", "CONJ-RESOLUTION",
                                       overall_width(r.mu.density, opts.eps1).width *
                                           overall_width(r.nu.density, opts.eps2).width,
                                       wbound));
    return r;
}

} // namespace ulab
