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

#include "ulab/covariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ulab/error.hpp"
#include "ulab/optimize.hpp"

namespace ulab {

SmearingMeasure SmearingMeasure::from(ProbabilityDensity d) {
    d.validate(1e-6);
    SmearingMeasure m;
    m.first_moment = d.mean();
    m.variance = d.variance();
    m.abs_first_moment = d.abs_moment();
    m.density = std::move(d);
    return m;
}

ProbabilityDensity smear(const ProbabilityDensity &dist, const SmearingMeasure &m, kernels::Backend backend) {
    const auto &md = m.density;
    require(std::abs(dist.spacing - md.spacing) <= 1e-9 * dist.spacing, ErrorKind::grid_mismatch,
            "smearing measure and distribution use different spacings");
    ProbabilityDensity out;
    out.start = dist.start + md.start;
    out.spacing = dist.spacing;
    out.kind = DensityKind::generic;
    out.weights = kernels::convolve(dist.weights, md.weights, dist.spacing, backend);
    return out;
}

namespace {

ProbabilityDensity momentum_density_of(const DensityMatrix &T) {
    ProbabilityDensity d;
    for (const auto &[w, phi] : T.components()) {
        auto m = momentum_density(phi);
        if (d.weights.empty()) {
            d = m;
            std::fill(d.weights.begin(), d.weights.end(), 0.0);
        }
        for (std::size_t k = 0; k < m.size(); ++k) {
            d.weights[k] += w * m.weights[k];
        }
    }
    return d;
}

ProbabilityDensity position_density_of(const DensityMatrix &T) {
    const auto &g = T.grid();
    ProbabilityDensity d;
    d.start = g.x_min;
    d.spacing = g.dx;
    d.kind = DensityKind::position;
    d.weights.resize(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        d.weights[i] = std::max(0.0, T.matrix()(ii, ii).real());
    }
    return d;
}

void require_eps(double eps) {
    require(eps > 0.0 && eps < 0.5, ErrorKind::parameter, "epsilon must lie in (0, 1/2)");
}

} // namespace

CovariantObservable gt_from_T(const DensityMatrix &T) {
    const auto pt = T.parity_conjugated();
    auto mu = position_density_of(pt);
    mu.kind = DensityKind::generic;
    auto nu = momentum_density_of(pt);
    nu.kind = DensityKind::generic;
    return CovariantObservable{T, SmearingMeasure::from(std::move(mu)), SmearingMeasure::from(std::move(nu))};
}

double PhaseSpaceDensity::mass() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0) * dq * dp;
}

ProbabilityDensity PhaseSpaceDensity::marginal_q() const {
    ProbabilityDensity d;
    d.start = q0;
    d.spacing = dq;
    d.weights.assign(nq, 0.0);
    for (std::size_t i = 0; i < nq; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < np; ++k) {
            s += at(i, k);
        }
        d.weights[i] = s * dp;
    }
    return d;
}

ProbabilityDensity PhaseSpaceDensity::marginal_p() const {
    ProbabilityDensity d;
    d.start = p0;
    d.spacing = dp;
    d.weights.assign(np, 0.0);
    for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t k = 0; k < np; ++k) {
            d.weights[k] += at(i, k);
        }
    }
    for (double &w : d.weights) {
        w *= dq;
    }
    return d;
}

PhaseSpaceDensity husimi(const WaveFunction &psi, const CovariantObservable &G, std::size_t stride,
                         kernels::Backend backend) {
    const auto &grid = G.T.grid();
    require(psi.grid().same_as(grid), ErrorKind::grid_mismatch, "state and T live on different grids");
    require(stride >= 1, ErrorKind::parameter, "stride must be positive");
    const auto &comps = G.T.components();
    require(comps.size() <= max_husimi_rank, ErrorKind::cost, "T has rank above 8");
    const auto x = in_rep(psi, Rep::position);
    const std::size_t n = grid.n_points;
    std::vector<std::size_t> rows;
    for (std::size_t s = 0; s < n; s += stride) {
        rows.push_back(s);
    }
    PhaseSpaceDensity h;
    h.q0 = grid.x_min;
    h.dq = grid.dx * static_cast<double>(stride);
    h.nq = rows.size();
    h.p0 = grid.p_min();
    h.dp = grid.dp();
    h.np = n;
    h.weights.assign(h.nq * n, 0.0);
    std::vector<cplx> window(n);
    for (const auto &[w, phi] : comps) {
        const auto &a = phi.amplitudes();
        for (std::size_t i = 0; i < n; ++i) {
            window[i] = std::conj(a[i]);
        }
        const auto part = kernels::spectrogram(grid, window, x.amplitudes(), rows, backend);
        for (std::size_t i = 0; i < part.size(); ++i) {
            h.weights[i] += w * part[i];
        }
    }
    return h;
}

CovariantReport inaccuracy_measures(const CovariantObservable &G, double eps1, double eps2) {
    require_eps(eps1);
    require_eps(eps2);
    const double hbar = G.T.grid().hbar;
    auto fill = [](const SmearingMeasure &m, const ProbabilityDensity &sharp, double eps) {
        MarginalMeasures r;
        r.noise = m.variance;
        r.resolution = overall_width(m.density, eps).width;
        r.standard_error = std::sqrt(m.first_moment * m.first_moment + m.variance);
        r.distance = m.abs_first_moment;
        r.error_bar_lower = overall_width(sharp, eps).width;
        return r;
    };
    CovariantReport rep;
    rep.eps1 = eps1;
    rep.eps2 = eps2;
    rep.q = fill(G.mu, position_density_of(G.T), eps1);
    rep.p = fill(G.nu, momentum_density_of(G.T), eps2);
    const double wbound = overall_width_bound(hbar, eps1, eps2);
    rep.checks.push_back(make_check("noise product", "UR-NOISE", rep.q.noise * rep.p.noise, hbar * hbar / 4.0));
    rep.checks.push_back(
        make_check("resolution width product", "UR-RESOLUTION", rep.q.resolution * rep.p.resolution, wbound));
    rep.checks.push_back(make_check("standard error product", "UR-STD-ERROR",
                                    rep.q.standard_error * rep.p.standard_error, hbar / 2.0));
    rep.checks.push_back(
        make_check("distance product", "UR-DISTANCE", rep.q.distance * rep.p.distance, werner_constant * hbar));
    rep.checks.push_back(make_check("error bar lower-bound product", "UR-ERROR-BAR-LOWER",
                                    rep.q.error_bar_lower * rep.p.error_bar_lower, wbound));
    rep.conjectures.push_back(
        make_check("noise product vs hbar/2", "CONJ-NOISE-HALF", rep.q.noise * rep.p.noise, hbar / 2.0));
    rep.conjectures.push_back(make_check("noise product vs hbar^2/4", "CONJ-NOISE-QUARTER",
                                         rep.q.noise * rep.p.noise, hbar * hbar / 4.0));
    rep.conjectures.push_back(make_check("resolution width product", "CONJ-RESOLUTION",
                                         rep.q.resolution * rep.p.resolution, wbound));
    return rep;
}

CovariantStateReport check_covariant_state_ur(const WaveFunction &psi, const CovariantObservable &G) {
    require(psi.grid().same_as(G.T.grid()), ErrorKind::grid_mismatch, "state and T live on different grids");
    const auto pq = position_density(psi);
    const auto pp = momentum_density(psi);
    CovariantStateReport r;
    r.delta_q = smear(pq, G.mu).stddev();
    r.delta_p = smear(pp, G.nu).stddev();
    r.delta_q_added = std::sqrt(pq.variance() + G.mu.variance);
    r.delta_p_added = std::sqrt(pp.variance() + G.nu.variance);
    r.check = make_check("smeared spread product", "UR-COV-STATE", r.delta_q * r.delta_p, psi.grid().hbar);
    return r;
}

Channel sharp_channel(const GridSpec &grid, Observable axis) {
    Channel c;
    c.grid = grid;
    c.axis = axis;
    if (axis == Observable::Q) {
        c.output = [](const WaveFunction &psi) { return position_density(psi); };
    } else {
        c.output = [](const WaveFunction &psi) { return momentum_density(psi); };
    }
    return c;
}

Channel smeared_channel(const GridSpec &grid, Observable axis, const SmearingMeasure &m) {
    const double s = axis == Observable::Q ? grid.dx : grid.dp();
    require(std::abs(m.density.spacing - s) <= 1e-9 * s, ErrorKind::grid_mismatch,
            "smearing measure spacing differs from the channel grid");
    Channel c = sharp_channel(grid, axis);
    auto sharp = c.output;
    c.output = [sharp, m](const WaveFunction &psi) { return smear(sharp(psi), m); };
    return c;
}

namespace {

// Uniform modulus on cells [first, first + count) of the axis grid.
WaveFunction indicator_state(const GridSpec &grid, Observable axis, std::size_t first, std::size_t count) {
    std::vector<cplx> v(grid.n_points, cplx{0.0, 0.0});
    for (std::size_t j = first; j < first + count; ++j) {
        v[j] = 1.0;
    }
    if (axis == Observable::Q) {
        return WaveFunction::normalized(grid, std::move(v), Rep::position);
    }
    return to_position(WaveFunction::normalized(grid, std::move(v), Rep::momentum));
}

// Smallest w with mass >= target in the closed interval [x - w/2, x + w/2],
// counting whole output cells.
double centred_width(const ProbabilityDensity &d, double x, double target) {
    std::vector<std::size_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> dist(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        dist[i] = std::abs(d.coord(i) - x);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    double acc = 0.0;
    for (std::size_t i : idx) {
        acc += d.weights[i] * d.spacing;
        if (acc >= target) {
            return 2.0 * dist[i] + d.spacing;
        }
    }
    fail(ErrorKind::coverage, "output density never reaches the requested confidence");
}

} // namespace

CalibrationResult error_bar_calibrate(const Channel &channel, double eps, double delta) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::parameter, "epsilon must lie in (0, 1)");
    const auto &grid = channel.grid;
    grid.validate();
    const bool q = channel.axis == Observable::Q;
    GridSpec axis_grid = grid;
    if (!q) {
        axis_grid.x_min = grid.p_min();
        axis_grid.dx = grid.dp();
    }
    const double s = axis_grid.dx;
    const double lo = axis_grid.x_min;
    const double len = axis_grid.length();
    require(delta >= 4.0 * s * (1.0 - 1e-9), ErrorKind::resolution, "delta must cover at least 4 grid cells");
    require(delta <= 0.3 * len, ErrorKind::coverage, "delta too large for the window");

    constexpr int lattice = 9;
    const double target = 1.0 - eps - 1e-13;
    CalibrationResult res;
    res.epsilon = eps;
    res.delta = delta;
    for (int c = 0; c < lattice; ++c) {
        const double centre = lo + len * (0.3 + 0.4 * c / (lattice - 1));
        const auto r = snap_box(axis_grid, centre, delta);
        const double x = 0.5 * (r.cells.lo + r.cells.hi);
        std::vector<std::pair<std::size_t, std::size_t>> inputs{{r.first, r.count}};
        if (r.count > 8) {
            inputs.emplace_back(r.first, 4);
            inputs.emplace_back(r.first + r.count - 4, 4);
        }
        for (const auto &[first, count] : inputs) {
            const auto out = channel.output(indicator_state(grid, channel.axis, first, count));
            const double w = centred_width(out, x, target);
            require(x - 0.5 * w >= lo && x + 0.5 * w <= lo + len, ErrorKind::coverage,
                    "error bar exceeds the grid window");
            ++res.states;
            if (w > res.width) {
                res.width = w;
                res.worst_center = x;
            }
        }
    }
    return res;
}

ErrorBarReport covariant_error_bars(const CovariantObservable &G, double eps1, double eps2, double delta_q,
                                    double delta_p) {
    require_eps(eps1);
    require_eps(eps2);
    const auto &grid = G.T.grid();
    ErrorBarReport r;
    r.q = error_bar_calibrate(smeared_channel(grid, Observable::Q, G.mu), eps1, delta_q);
    r.p = error_bar_calibrate(smeared_channel(grid, Observable::P, G.nu), eps2, delta_p);
    r.check = make_check("calibrated error bar product", "UR-ERROR-BAR", r.q.width * r.p.width,
                         overall_width_bound(grid.hbar, eps1, eps2));
    return r;
}

double werner_distance_lower_bound(const Channel &channel, const std::vector<WaveFunction> &inputs,
                                   const std::vector<double> &radii) {
    const auto sharp = sharp_channel(channel.grid, channel.axis);
    auto expect = [](const ProbabilityDensity &d, double c, double r) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            s += d.weights[i] * std::max(0.0, r - std::abs(d.coord(i) - c));
        }
        return s * d.spacing;
    };
    double best = 0.0;
    for (const auto &psi : inputs) {
        const auto out = channel.output(psi);
        const auto ref = sharp.output(psi);
        const double m = ref.mean();
        for (double r : radii) {
            for (double off : {-0.5 * r, 0.0, 0.5 * r}) {
                best = std::max(best, std::abs(expect(out, m + off, r) - expect(ref, m + off, r)));
            }
        }
    }
    return best;
}

namespace {

// Orthonormal oscillator eigenfunctions h_0..h_{n-1} at x (unit length scale).
std::vector<double> hermite_functions(double x, int n) {
    std::vector<double> h(static_cast<std::size_t>(n));
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n > 1) {
        h[1] = std::sqrt(2.0) * x * h[0];
    }
    for (int k = 1; k + 1 < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        h[ku + 1] = std::sqrt(2.0 / (k + 1)) * x * h[ku] - std::sqrt(static_cast<double>(k) / (k + 1)) * h[ku - 1];
    }
    return h;
}

struct AbsMomentForms {
    Eigen::MatrixXd a; // int |x| h_m h_n
    Eigen::MatrixXd b; // same form after the Fourier phases (-i)^n
};

AbsMomentForms abs_moment_forms(int n) {
    constexpr int intervals = 6000;
    constexpr double x_max = 16.0;
    const double h = x_max / intervals;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k <= intervals; ++k) {
        const double x = h * k;
        const double wgt = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        const auto hv = hermite_functions(x, n);
        for (int m = 0; m < n; ++m) {
            for (int l = m; l < n; l += 2) {
                a(m, l) += wgt * x * hv[static_cast<std::size_t>(m)] * hv[static_cast<std::size_t>(l)];
            }
        }
    }
    // Simpson on [0, x_max], doubled for the even integrand
    a *= 2.0 * h / 3.0;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < n; ++m) {
        for (int l = m; l < n; l += 2) {
            a(l, m) = a(m, l);
            const double phase = ((l - m) / 2) % 2 == 0 ? 1.0 : -1.0;
            b(m, l) = b(l, m) = phase * a(m, l);
        }
    }
    return {a, b};
}

double product_form(const AbsMomentForms &f, const Eigen::VectorXd &c) {
    const double n2 = c.squaredNorm();
    return c.dot(f.a * c) * c.dot(f.b * c) / (n2 * n2);
}

} // namespace

double werner_product(const std::vector<double> &coefficients) {
    require(!coefficients.empty() && coefficients.size() <= 40, ErrorKind::parameter,
            "coefficient count must lie in [1, 40]");
    const int n = static_cast<int>(coefficients.size());
    const auto f = abs_moment_forms(n);
    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coefficients.data(), n);
    require(c.squaredNorm() > 0.0, ErrorKind::parameter, "zero coefficient vector");
    return product_form(f, c);
}

WernerSearchResult werner_constant_search(const WernerSearchOptions &opts) {
    require(opts.basis_size >= 1 && opts.basis_size <= 20, ErrorKind::parameter, "basis_size must lie in [1, 20]");
    require(opts.starts >= 1, ErrorKind::parameter, "need at least one start");
    require(opts.budget >= opts.starts, ErrorKind::parameter, "budget smaller than the number of starts");
    const int n = opts.basis_size;
    const auto forms = abs_moment_forms(n);
    const int per_start = opts.budget / opts.starts;

    struct StartResult {
        std::vector<double> y;
        double value = 0.0;
        std::vector<double> trace;
    };
    std::vector<StartResult> runs(static_cast<std::size_t>(opts.starts));

    auto run_one = [&](int s) {
        std::vector<double> y0(static_cast<std::size_t>(n - 1), 0.0);
        if (s > 0) {
            std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
            std::normal_distribution<double> g(0.0, 0.3);
            for (double &v : y0) {
                v = g(rng);
            }
        }
        auto &out = runs[static_cast<std::size_t>(s)];
        const auto objective = [&](std::span<const double> y) {
            Eigen::VectorXd c(n);
            c(0) = 1.0;
            for (int i = 1; i < n; ++i) {
                c(i) = y[static_cast<std::size_t>(i - 1)];
            }
            return product_form(forms, c);
        };
        NelderMeadOptions nm;
        nm.max_evaluations = per_start;
        const auto r = nelder_mead(objective, y0, nm, [&](int, double v) { out.trace.push_back(v); });
        out.y = r.x;
        out.value = r.value;
    };

    const int starts = opts.starts;
    if (opts.backend == kernels::Backend::serial) {
        for (int s = 0; s < starts; ++s) {
            run_one(s);
        }
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < starts; ++s) {
            run_one(s);
        }
    }

    WernerSearchResult res;
    int best = 0;
    for (int s = 1; s < starts; ++s) {
        if (runs[static_cast<std::size_t>(s)].value < runs[static_cast<std::size_t>(best)].value) {
            best = s;
        }
    }
    double running = std::numeric_limits<double>::infinity();
    int count = 0;
    for (int s = 0; s < starts; ++s) {
        for (double v : runs[static_cast<std::size_t>(s)].trace) {
            running = std::min(running, v);
            res.log.push_back({++count, s, v, running});
        }
    }
    const auto &win = runs[static_cast<std::size_t>(best)];
    std::vector<double> c(static_cast<std::size_t>(n));
    c[0] = 1.0;
    std::copy(win.y.begin(), win.y.end(), c.begin() + 1);
    const double norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
    for (double &v : c) {
        v /= norm;
    }
    res.c_est = win.value;
    res.coefficients = c;
    res.excited_mass = 1.0 - c[0] * c[0];
    res.evaluations = count;
    res.best_start = best;
    res.converged = res.c_est >= 0.29 && res.c_est <= 0.3185;
    if (!res.converged) {
        std::ostringstream os;
        os << "distance-product search ended at " << res.c_est << ", outside [0.29, 0.3185]";
        warn(WarningKind::convergence, os.str());
    }
    return res;
}

WaveFunction werner_state(const GridSpec &grid, const std::vector<double> &coefficients) {
    grid.validate();
    require(!coefficients.empty(), ErrorKind::parameter, "empty coefficient vector");
    const int n = static_cast<int>(coefficients.size());
    const double ell = std::sqrt(grid.hbar);
    std::vector<cplx> v(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const auto h = hermite_functions(grid.x(j) / ell, n);
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            s += coefficients[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k)];
        }
        v[j] = s;
    }
    auto psi = WaveFunction::normalized(grid, std::move(v));
    require(boundary_mass(psi) <= boundary_mass_limit, ErrorKind::aliasing, "oscillator state leaks to the edge");
    return psi;
}

MonotoneMap::MonotoneMap(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    require(xs_.size() >= 2 && xs_.size() == ys_.size(), ErrorKind::parameter,
            "monotone map needs two equally long tables of at least two entries");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        require(xs_[i] > xs_[i - 1] && ys_[i] > ys_[i - 1], ErrorKind::parameter,
                "map table is not strictly increasing");
    }
}

MonotoneMap MonotoneMap::identity() { return MonotoneMap({0.0, 1.0}, {0.0, 1.0}); }

MonotoneMap MonotoneMap::tabulate(const std::function<double(double)> &f, double lo, double hi, std::size_t n) {
    require(n >= 2 && hi > lo, ErrorKind::parameter, "bad tabulation range");
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        ys[i] = f(xs[i]);
    }
    return MonotoneMap(std::move(xs), std::move(ys));
}

namespace {

double piecewise(const std::vector<double> &from, const std::vector<double> &to, double x) {
    if (x <= from.front()) {
        return x + (to.front() - from.front());
    }
    if (x >= from.back()) {
        return x + (to.back() - from.back());
    }
    const auto it = std::upper_bound(from.begin(), from.end(), x);
    const auto i = static_cast<std::size_t>(it - from.begin());
    const double t = (x - from[i - 1]) / (from[i] - from[i - 1]);
    return to[i - 1] + t * (to[i] - to[i - 1]);
}

} // namespace

double MonotoneMap::operator()(double x) const { return piecewise(xs_, ys_, x); }

double MonotoneMap::inverse(double y) const { return piecewise(ys_, xs_, y); }

ProbabilityDensity warp_density(const ProbabilityDensity &d, const MonotoneMap &gamma) {
    const std::size_t n = d.size();
    require(n > 0, ErrorKind::parameter, "empty density");
    const double e0 = d.start - 0.5 * d.spacing;
    std::vector<double> cdf(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cdf[i + 1] = cdf[i] + d.weights[i] * d.spacing;
    }
    // F is linear inside each cell
    auto F = [&](double t) {
        const double u = (t - e0) / d.spacing;
        if (u <= 0.0) {
            return 0.0;
        }
        if (u >= static_cast<double>(n)) {
            return cdf[n];
        }
        const auto i = static_cast<std::size_t>(u);
        return cdf[i] + (u - static_cast<double>(i)) * (cdf[i + 1] - cdf[i]);
    };
    ProbabilityDensity out = d;
    out.kind = DensityKind::generic;
    double prev = F(gamma.inverse(e0));
    for (std::size_t i = 0; i < n; ++i) {
        const double next = F(gamma.inverse(e0 + d.spacing * static_cast<double>(i + 1)));
        out.weights[i] = std::max(0.0, next - prev) / d.spacing;
        prev = next;
    }
    return out;
}

WarpReport warp_observable(const WaveFunction &psi, const CovariantObservable &G, const MonotoneMap &gamma1,
                           const MonotoneMap &gamma2, const WarpOptions &opts) {
    const auto &grid = G.T.grid();
    require(psi.grid().same_as(grid), ErrorKind::grid_mismatch, "state and T live on different grids");
    const auto base_q = smeared_channel(grid, Observable::Q, G.mu);
    const auto base_p = smeared_channel(grid, Observable::P, G.nu);
    Channel warped_q = base_q;
    warped_q.output = [f = base_q.output, gamma1](const WaveFunction &s) { return warp_density(f(s), gamma1); };
    Channel warped_p = base_p;
    warped_p.output = [f = base_p.output, gamma2](const WaveFunction &s) { return warp_density(f(s), gamma2); };

    WarpReport r;
    r.marginal_q = warped_q.output(psi);
    r.marginal_p = warped_p.output(psi);
    r.error_bar_q = error_bar_calibrate(warped_q, opts.eps, opts.delta_q);
    r.error_bar_p = error_bar_calibrate(warped_p, opts.eps, opts.delta_p);
    r.plain_error_bar_q = error_bar_calibrate(base_q, opts.eps, opts.delta_q);
    r.plain_error_bar_p = error_bar_calibrate(base_p, opts.eps, opts.delta_p);

    const auto kq = static_cast<long long>(std::llround(opts.shift / grid.dx));
    const auto kp = static_cast<long long>(std::llround(opts.shift / grid.dp()));
    const auto moved_q = weyl_shift(psi, static_cast<double>(kq) * grid.dx, 0.0);
    const auto moved_p = weyl_shift(psi, 0.0, static_cast<double>(kp) * grid.dp());
    const double dq = total_variation(warped_q.output(moved_q), shifted_bins(r.marginal_q, kq));
    const double dp = total_variation(warped_p.output(moved_p), shifted_bins(r.marginal_p, kp));
    r.covariance_defect = std::max(dq, dp);
    r.covariant = r.covariance_defect <= covariance_defect_threshold;
    return r;
}

} // namespace ulab
