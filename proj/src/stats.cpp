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

#include "ulab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ulab/error.hpp"
#include "ulab/states.hpp"

namespace ulab {

double ProbabilityDensity::mass() const {
    double s = 0.0;
    for (double w : weights) {
        s += w;
    }
    return s * spacing;
}

double ProbabilityDensity::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        s += weights[i] * coord(i);
    }
    return s * spacing / mass();
}

double ProbabilityDensity::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double d = coord(i) - m;
        s += weights[i] * d * d;
    }
    return s * spacing / mass();
}

double ProbabilityDensity::stddev() const { return std::sqrt(std::max(0.0, variance())); }

double ProbabilityDensity::abs_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        s += weights[i] * std::abs(coord(i));
    }
    return s * spacing / mass();
}

double ProbabilityDensity::probability(double lo, double hi) const {
    const double tol = 1e-9 * spacing;
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double c = coord(i);
        if (c >= lo - tol && c <= hi + tol) {
            s += weights[i];
        }
    }
    return s * spacing;
}

void ProbabilityDensity::validate(double tol) const {
    require(spacing > 0.0, ErrorKind::parameter, "density spacing must be positive");
    for (double w : weights) {
        require(w >= 0.0 && std::isfinite(w), ErrorKind::parameter, "density weights must be >= 0");
    }
    require(std::abs(mass() - 1.0) <= tol, ErrorKind::parameter, "density does not integrate to 1");
}

ProbabilityDensity position_density(const WaveFunction &psi) {
    const auto x = in_rep(psi, Rep::position);
    ProbabilityDensity d;
    d.start = x.grid().x_min;
    d.spacing = x.grid().dx;
    d.kind = DensityKind::position;
    d.weights.reserve(x.size());
    for (const auto &a : x.amplitudes()) {
        d.weights.push_back(std::norm(a));
    }
    return d;
}

ProbabilityDensity momentum_density(const WaveFunction &psi) {
    const auto p = in_rep(psi, Rep::momentum);
    ProbabilityDensity d;
    d.start = p.grid().p_min();
    d.spacing = p.grid().dp();
    d.kind = DensityKind::momentum;
    d.weights.reserve(p.size());
    for (const auto &a : p.amplitudes()) {
        d.weights.push_back(std::norm(a));
    }
    return d;
}

double total_variation(const ProbabilityDensity &a, const ProbabilityDensity &b) {
    require(std::abs(a.spacing - b.spacing) <= 1e-9 * a.spacing, ErrorKind::grid_mismatch,
            "densities have different spacings");
    const double off_f = (b.start - a.start) / a.spacing;
    const double off_r = std::round(off_f);
    require(std::abs(off_f - off_r) <= 1e-6, ErrorKind::grid_mismatch,
            "density grids are not offset by whole bins");
    const auto off = static_cast<long long>(off_r);
    const auto na = static_cast<long long>(a.size());
    const auto nb = static_cast<long long>(b.size());
    const long long lo = std::min(0LL, off);
    const long long hi = std::max(na, off + nb);
    double s = 0.0;
    for (long long i = lo; i < hi; ++i) {
        const double wa = (i >= 0 && i < na) ? a.weights[static_cast<std::size_t>(i)] : 0.0;
        const long long ib = i - off;
        const double wb = (ib >= 0 && ib < nb) ? b.weights[static_cast<std::size_t>(ib)] : 0.0;
        s += std::abs(wa - wb);
    }
    return 0.5 * s * a.spacing;
}

ProbabilityDensity shifted_bins(const ProbabilityDensity &d, long long k) {
    ProbabilityDensity out = d;
    out.start += static_cast<double>(k) * d.spacing;
    return out;
}

namespace {

void warn_if_untrusted(const ProbabilityDensity &d, const char *what) {
    const std::size_t n = d.size();
    const auto edge = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n)));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < edge || i >= n - edge) {
            s += d.weights[i];
        }
    }
    s *= d.spacing;
    if (s > 1e-6) {
        std::ostringstream os;
        os << what << " moments untrusted: mass " << s << " in the outer window";
        warn(WarningKind::untrusted_moment, os.str());
    }
}

} // namespace

double stddev(const WaveFunction &psi, Observable which) {
    const auto d = which == Observable::Q ? position_density(psi) : momentum_density(psi);
    warn_if_untrusted(d, which == Observable::Q ? "position" : "momentum");
    return d.stddev();
}

double expectation(const WaveFunction &psi, Observable which) {
    const auto d = which == Observable::Q ? position_density(psi) : momentum_density(psi);
    return d.mean();
}

WidthReport overall_width(const ProbabilityDensity &d, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::parameter, "epsilon must lie in (0, 1)");
    require(!d.weights.empty(), ErrorKind::parameter, "empty density");
    const double target = (1.0 - epsilon) * d.mass() - 1e-13;
    const std::size_t n = d.size();
    std::size_t best_i = 0;
    std::size_t best_count = n + 1;
    double best_mass = 0.0;
    double window = 0.0;
    std::size_t j = 0; // one past the right end
    for (std::size_t i = 0; i < n; ++i) {
        while (j < n && window * d.spacing < target) {
            window += d.weights[j];
            ++j;
        }
        if (window * d.spacing < target) {
            break;
        }
        if (j - i < best_count) {
            best_count = j - i;
            best_i = i;
            best_mass = window * d.spacing;
        }
        window -= d.weights[i];
    }
    require(best_count <= n, ErrorKind::numerical, "no interval reaches the requested mass");
    WidthReport r;
    r.epsilon = epsilon;
    r.width = static_cast<double>(best_count) * d.spacing;
    r.lo = d.coord(best_i) - 0.5 * d.spacing;
    r.hi = r.lo + r.width;
    r.covered = best_mass / d.mass();
    return r;
}

PrepUrReport check_preparation_ur(const WaveFunction &psi) {
    PrepUrReport r;
    r.delta_q = stddev(psi, Observable::Q);
    r.delta_p = stddev(psi, Observable::P);
    r.product = r.delta_q * r.delta_p;
    r.bound = 0.5 * psi.grid().hbar;
    r.margin = r.product - r.bound;
    r.pass = r.margin >= -1e-9;
    r.implied_delta_p_bound = r.delta_q > 0.0 ? psi.grid().hbar / (2.0 * r.delta_q) : 0.0;
    return r;
}

double overall_width_bound(double hbar, double eps1, double eps2) {
    const double s = 1.0 - eps1 - eps2;
    return s > 0.0 ? 2.0 * std::numbers::pi * hbar * s * s : 0.0;
}

double uffink_bound(double hbar, double eps1, double eps2) {
    const double s = std::sqrt((1.0 - eps1) * (1.0 - eps2)) - std::sqrt(eps1 * eps2);
    return s > 0.0 ? 2.0 * std::numbers::pi * hbar * s * s : 0.0;
}

WidthUrReport check_overall_width_ur(const WaveFunction &psi, double eps1, double eps2) {
    require(eps1 > 0.0 && eps1 < 0.5 && eps2 > 0.0 && eps2 < 0.5, ErrorKind::parameter,
            "overall-width relation needs epsilons in (0, 1/2)");
    WidthUrReport r;
    r.position = overall_width(position_density(psi), eps1);
    r.momentum = overall_width(momentum_density(psi), eps2);
    r.product = r.position.width * r.momentum.width;
    const double hbar = psi.grid().hbar;
    r.bound = overall_width_bound(hbar, eps1, eps2);
    r.uffink = uffink_bound(hbar, eps1, eps2);
    r.pass_bound = r.product >= r.bound;
    r.pass_uffink = r.product >= r.uffink;
    return r;
}

WaveFunction target_spreads(const GridSpec &grid, double delta_q, double delta_p) {
    require(delta_q > 0.0 && delta_p > 0.0, ErrorKind::parameter, "spreads must be positive");
    const double hbar = grid.hbar;
    if (delta_q * delta_p < 0.5 * hbar * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "requested spreads " << delta_q << " * " << delta_p << " < hbar/2";
        fail(ErrorKind::uncertainty_violation, os.str());
    }
    const double a = 1.0 / (4.0 * delta_q * delta_q);
    const double b2 = a * delta_p * delta_p / (hbar * hbar) - a * a;
    return gaussian(grid, a, std::sqrt(std::max(0.0, b2)));
}

} // namespace ulab
