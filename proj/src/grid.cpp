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

#include "ulab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW's planner is not thread-safe, execution with fftw_execute_dft is.
const PlanPair &plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<cplx> scratch(n);
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    const int len = static_cast<int>(n);
    PlanPair plans;
    plans.forward = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.backward = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plans.forward == nullptr || plans.backward == nullptr) {
        fail(ErrorKind::numerical, "FFTW planning failed");
    }
    return cache.emplace(n, plans).first->second;
}

// exp(i * 2 pi * m / n) with m reduced modulo n before the multiply.
cplx root_of_unity(long long m, std::size_t n) {
    const auto nn = static_cast<long long>(n);
    long long r = m % nn;
    if (r < 0) {
        r += nn;
    }
    return std::polar(1.0, two_pi * static_cast<double>(r) / static_cast<double>(n));
}

} // namespace

GridSpec GridSpec::centered(std::size_t n, double length, double hbar) {
    GridSpec g;
    g.n_points = n;
    g.dx = length / static_cast<double>(n);
    g.x_min = -0.5 * length;
    g.hbar = hbar;
    g.validate();
    return g;
}

double GridSpec::dp() const { return two_pi * hbar / (static_cast<double>(n_points) * dx); }

double GridSpec::p(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(momentum_origin())) * dp();
}

bool GridSpec::is_symmetric() const {
    return std::abs(x_min + 0.5 * length()) <= 1e-12 * std::max(1.0, length());
}

bool GridSpec::same_as(const GridSpec &o) const {
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    return n_points == o.n_points && close(x_min, o.x_min) && close(dx, o.dx) && close(hbar, o.hbar);
}

void GridSpec::validate() const {
    require(n_points >= 16, ErrorKind::parameter, "grid needs at least 16 points");
    require(dx > 0.0 && std::isfinite(dx), ErrorKind::parameter, "grid spacing must be positive");
    require(hbar > 0.0 && std::isfinite(hbar), ErrorKind::parameter, "hbar must be positive");
    require(std::isfinite(x_min), ErrorKind::parameter, "x_min must be finite");
}

WaveFunction::WaveFunction(GridSpec grid, std::vector<cplx> amplitudes, Rep rep)
    : grid_(grid), amps_(std::move(amplitudes)), rep_(rep) {
    grid_.validate();
    require(amps_.size() == grid_.n_points, ErrorKind::parameter,
            "amplitude count does not match the grid");
    const double nrm = norm();
    if (std::abs(nrm - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "wave function is not normalized (norm^2 = " << nrm << ")";
        fail(ErrorKind::parameter, os.str());
    }
}

WaveFunction WaveFunction::normalized(GridSpec grid, std::vector<cplx> amplitudes, Rep rep) {
    grid.validate();
    require(amplitudes.size() == grid.n_points, ErrorKind::parameter,
            "amplitude count does not match the grid");
    const double h = rep == Rep::position ? grid.dx : grid.dp();
    double s = 0.0;
    for (const auto &a : amplitudes) {
        s += std::norm(a);
    }
    s *= h;
    require(s > 0.0 && std::isfinite(s), ErrorKind::parameter, "cannot normalize a zero state");
    const double scale = 1.0 / std::sqrt(s);
    for (auto &a : amplitudes) {
        a *= scale;
    }
    return WaveFunction(grid, std::move(amplitudes), rep);
}

double WaveFunction::spacing() const { return rep_ == Rep::position ? grid_.dx : grid_.dp(); }

double WaveFunction::coordinate(std::size_t i) const {
    return rep_ == Rep::position ? grid_.x(i) : grid_.p(i);
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s * spacing();
}

void forward_transform(const GridSpec &grid, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t n = grid.n_points;
    require(in.size() == n && out.size() == n, ErrorKind::parameter, "transform size mismatch");
    const auto &plans = plans_for(n);
    const auto k0 = static_cast<long long>(grid.momentum_origin());
    std::vector<cplx> buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        buf[j] = in[j] * root_of_unity(k0 * static_cast<long long>(j), n);
    }
    auto *raw = reinterpret_cast<fftw_complex *>(buf.data());
    fftw_execute_dft(plans.forward, raw, raw);
    const double scale = grid.dx / std::sqrt(two_pi * grid.hbar);
    const double dp = grid.dp();
    for (std::size_t k = 0; k < n; ++k) {
        const double phase =
            -(static_cast<double>(k) - static_cast<double>(k0)) * dp * grid.x_min / grid.hbar;
        out[k] = scale * std::polar(1.0, phase) * buf[k];
    }
}

void inverse_transform(const GridSpec &grid, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t n = grid.n_points;
    require(in.size() == n && out.size() == n, ErrorKind::parameter, "transform size mismatch");
    const auto &plans = plans_for(n);
    const auto k0 = static_cast<long long>(grid.momentum_origin());
    const double dp = grid.dp();
    std::vector<cplx> buf(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase =
            (static_cast<double>(k) - static_cast<double>(k0)) * dp * grid.x_min / grid.hbar;
        buf[k] = in[k] * std::polar(1.0, phase);
    }
    auto *raw = reinterpret_cast<fftw_complex *>(buf.data());
    fftw_execute_dft(plans.backward, raw, raw);
    const double scale = dp / std::sqrt(two_pi * grid.hbar);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = scale * root_of_unity(-k0 * static_cast<long long>(j), n) * buf[j];
    }
}

WaveFunction to_momentum(const WaveFunction &psi) {
    require(psi.rep() == Rep::position, ErrorKind::representation,
            "to_momentum expects a position-representation state");
    std::vector<cplx> out(psi.size());
    forward_transform(psi.grid(), psi.amplitudes(), out);
    return WaveFunction::normalized(psi.grid(), std::move(out), Rep::momentum);
}

WaveFunction to_position(const WaveFunction &psi) {
    require(psi.rep() == Rep::momentum, ErrorKind::representation,
            "to_position expects a momentum-representation state");
    std::vector<cplx> out(psi.size());
    inverse_transform(psi.grid(), psi.amplitudes(), out);
    return WaveFunction::normalized(psi.grid(), std::move(out), Rep::position);
}

WaveFunction in_rep(const WaveFunction &psi, Rep rep) {
    if (psi.rep() == rep) {
        return psi;
    }
    return rep == Rep::momentum ? to_momentum(psi) : to_position(psi);
}

double boundary_mass(const WaveFunction &psi) {
    const std::size_t n = psi.size();
    const auto edge = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n)));
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j < edge || j >= n - edge) {
            s += std::norm(psi.amplitudes()[j]);
        }
    }
    return s * psi.spacing();
}

WaveFunction weyl_shift(const WaveFunction &psi, double q, double p) {
    const Rep original = psi.rep();
    const GridSpec &g = psi.grid();
    const std::size_t n = g.n_points;
    // boost in position representation
    auto x_state = in_rep(psi, Rep::position);
    std::vector<cplx> amps = x_state.amplitudes();
    for (std::size_t j = 0; j < n; ++j) {
        amps[j] *= std::polar(1.0, p * g.x(j) / g.hbar);
    }
    // translate in momentum representation
    std::vector<cplx> mom(n);
    forward_transform(g, amps, mom);
    for (std::size_t k = 0; k < n; ++k) {
        mom[k] *= std::polar(1.0, -q * g.p(k) / g.hbar);
    }
    inverse_transform(g, mom, amps);
    const cplx global = std::polar(1.0, q * p / (2.0 * g.hbar));
    for (auto &a : amps) {
        a *= global;
    }
    auto shifted = WaveFunction::normalized(g, std::move(amps), Rep::position);
    const double leak = std::max(boundary_mass(shifted), boundary_mass(to_momentum(shifted)));
    if (leak > boundary_mass_limit) {
        std::ostringstream os;
        os << "Weyl shift (" << q << ", " << p << ") leaves mass " << leak
           << " in the outer 5% of the window";
        warn(WarningKind::boundary_aliasing, os.str());
    }
    return in_rep(shifted, original);
}

WaveFunction parity(const WaveFunction &psi) {
    require(psi.grid().is_symmetric(), ErrorKind::grid_symmetry,
            "parity requires a grid symmetric about 0 (x_min = -n dx / 2)");
    const Rep original = psi.rep();
    auto x_state = in_rep(psi, Rep::position);
    const std::size_t n = psi.size();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = x_state.amplitudes()[(n - j) % n];
    }
    return in_rep(WaveFunction(psi.grid(), std::move(out), Rep::position), original);
}

cplx inner_product(const WaveFunction &a, const WaveFunction &b) {
    require(a.grid().same_as(b.grid()), ErrorKind::grid_mismatch, "inner product across grids");
    const auto bb = in_rep(b, a.rep());
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a.amplitudes()[i]) * bb.amplitudes()[i];
    }
    return s * a.spacing();
}

cplx interpolate(const WaveFunction &psi, double x) {
    const GridSpec &g = psi.grid();
    if (x < g.x_min || x >= g.x_min + g.length()) {
        return {0.0, 0.0};
    }
    const auto mom = in_rep(psi, Rep::momentum);
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < g.n_points; ++k) {
        s += mom.amplitudes()[k] * std::polar(1.0, g.p(k) * x / g.hbar);
    }
    return s * (g.dp() / std::sqrt(two_pi * g.hbar));
}

} // namespace ulab
