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

#include "ulab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_matrix_grid(const GridSpec &grid) {
    grid.validate();
    require(grid.n_points <= max_matrix_points, ErrorKind::cost,
            "matrix-valued work is limited to 1024 grid points");
}

// Column 0 of U^dagger diag(indicator) U, which is circulant on the grid.
std::vector<cplx> momentum_projector_column(const GridSpec &grid, const std::vector<bool> &in_set) {
    const std::size_t n = grid.n_points;
    std::vector<cplx> v(n, cplx{0.0, 0.0});
    v[0] = 1.0;
    forward_transform(grid, v, v);
    for (std::size_t k = 0; k < n; ++k) {
        if (!in_set[k]) {
            v[k] = 0.0;
        }
    }
    inverse_transform(grid, v, v);
    return v;
}

std::vector<bool> momentum_mask(const GridSpec &grid, const Interval &y) {
    const auto idx = snapped_indices(grid.p_min(), grid.dp(), grid.n_points, y);
    require(!idx.empty(), ErrorKind::degenerate_set, "momentum interval contains no grid points");
    std::vector<bool> mask(grid.n_points, false);
    for (auto k : idx) {
        mask[k] = true;
    }
    return mask;
}

Interval cells_of(const std::vector<std::size_t> &idx, double start, double step) {
    return {start + step * (static_cast<double>(idx.front()) - 0.5),
            start + step * (static_cast<double>(idx.back()) + 0.5)};
}

} // namespace

std::vector<std::size_t> snapped_indices(double start, double step, std::size_t n, const Interval &iv) {
    require(iv.hi >= iv.lo, ErrorKind::parameter, "interval with hi < lo");
    const double tol = 1e-9 * step;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = start + step * static_cast<double>(k);
        if (c >= iv.lo - tol && c < iv.hi - tol) {
            out.push_back(k);
        }
    }
    return out;
}

OperatorMatrix projector_position(const GridSpec &grid, const std::vector<Interval> &set) {
    check_matrix_grid(grid);
    const auto n = static_cast<Eigen::Index>(grid.n_points);
    Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(n);
    bool any = false;
    for (const auto &iv : set) {
        require(iv.lo >= grid.x_min - 1e-9 * grid.dx &&
                    iv.hi <= grid.x_min + grid.length() + 1e-9 * grid.dx,
                ErrorKind::range, "position set extends outside the grid window");
        for (auto j : snapped_indices(grid.x_min, grid.dx, grid.n_points, iv)) {
            diag(static_cast<Eigen::Index>(j)) = 1.0;
            any = true;
        }
    }
    require(any, ErrorKind::degenerate_set, "position set contains no grid points");
    return {grid, diag.asDiagonal().toDenseMatrix(), true};
}

OperatorMatrix projector_momentum(const GridSpec &grid, const Interval &y) {
    check_matrix_grid(grid);
    const double p_lo = grid.p_min() - 0.5 * grid.dp();
    const double p_hi = p_lo + grid.dp() * static_cast<double>(grid.n_points);
    require(y.lo >= p_lo - 1e-9 * grid.dp() && y.hi <= p_hi + 1e-9 * grid.dp(), ErrorKind::range,
            "momentum interval extends outside the momentum window");
    const auto col = momentum_projector_column(grid, momentum_mask(grid, y));
    const std::size_t n = grid.n_points;
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[(i + n - j) % n];
        }
    }
    return {grid, std::move(m), true};
}

A0Result largest_a0(const GridSpec &grid, const Interval &x, const Interval &y) {
    check_matrix_grid(grid);
    const auto xi = snapped_indices(grid.x_min, grid.dx, grid.n_points, x);
    require(!xi.empty(), ErrorKind::degenerate_set, "position interval contains no grid points");
    const auto mask = momentum_mask(grid, y);
    const auto col = momentum_projector_column(grid, mask);
    const std::size_t n = grid.n_points;
    const auto m = static_cast<Eigen::Index>(xi.size());
    // Q(X)P(Y)Q(X) vanishes off the X block; its spectrum is the block's plus zeros.
    Eigen::MatrixXcd block(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            block(a, b) = col[(xi[static_cast<std::size_t>(a)] + n - xi[static_cast<std::size_t>(b)]) % n];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success, ErrorKind::numerical, "eigensolver failed for Q(X)P(Y)Q(X)");
    A0Result r;
    r.a0 = std::clamp(es.eigenvalues().maxCoeff(), 0.0, 1.0);
    r.trace = block.trace().real();
    r.x_cells = cells_of(xi, grid.x_min, grid.dx);
    std::vector<std::size_t> yi;
    for (std::size_t k = 0; k < n; ++k) {
        if (mask[k]) {
            yi.push_back(k);
        }
    }
    r.y_cells = cells_of(yi, grid.p_min(), grid.dp());
    r.nominal_trace = r.x_cells.length() * r.y_cells.length() / (two_pi * grid.hbar);
    return r;
}

Localization optimal_localization(const GridSpec &grid, const Interval &x, const Interval &y) {
    const auto qx = projector_position(grid, {x});
    const auto py = projector_momentum(grid, y);
    Eigen::MatrixXcd sum = qx.matrix + py.matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sum);
    require(es.info() == Eigen::Success, ErrorKind::numerical, "eigensolver failed for Q(X)+P(Y)");
    const auto n = static_cast<Eigen::Index>(grid.n_points);
    std::vector<cplx> v(grid.n_points);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = es.eigenvectors()(i, n - 1);
    }
    Localization out;
    out.value = es.eigenvalues()(n - 1);
    out.state = WaveFunction::normalized(grid, std::move(v), Rep::position);
    const auto xi = snapped_indices(grid.x_min, grid.dx, grid.n_points, x);
    const auto yi = snapped_indices(grid.p_min(), grid.dp(), grid.n_points, y);
    for (auto j : xi) {
        out.prob_q += std::norm(out.state.amplitudes()[j]);
    }
    out.prob_q *= grid.dx;
    const auto mom = to_momentum(out.state);
    for (auto k : yi) {
        out.prob_p += std::norm(mom.amplitudes()[k]);
    }
    out.prob_p *= grid.dp();
    return out;
}

std::pair<Interval, Interval> cell_for_area(const GridSpec &grid, double area) {
    require(area > 0.0, ErrorKind::parameter, "area must be positive");
    const double p_window = grid.dp() * static_cast<double>(grid.n_points);
    const double lx = std::sqrt(area * grid.length() / p_window);
    const double ly = area / lx;
    return {Interval{-0.5 * lx, 0.5 * lx}, Interval{-0.5 * ly, 0.5 * ly}};
}

MinAreaResult min_area_for_confidence(const GridSpec &grid, double eps1, double eps2) {
    require(eps1 > 0.0 && eps2 > 0.0 && eps1 + eps2 < 1.0, ErrorKind::parameter,
            "need eps1, eps2 > 0 with eps1 + eps2 < 1");
    const double h = two_pi * grid.hbar;
    const double target = 1.0 - eps1 - eps2;
    auto eval = [&](double area) {
        const auto [x, y] = cell_for_area(grid, area);
        return largest_a0(grid, x, y);
    };
    double lo = 0.1 * h;
    double hi = 50.0 * h;
    const auto r_lo = eval(lo);
    auto r_hi = eval(hi);
    if (std::sqrt(r_lo.a0) >= target || std::sqrt(r_hi.a0) < target) {
        std::ostringstream os;
        os << "bisection bracket [0.1, 50] * 2 pi hbar does not bracket sqrt(a0) = " << target;
        fail(ErrorKind::range, os.str());
    }
    MinAreaResult out;
    while ((hi - lo) > 1e-4 * hi && out.iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        const auto r = eval(mid);
        if (std::sqrt(r.a0) >= target) {
            hi = mid;
            r_hi = r;
        } else {
            lo = mid;
        }
        ++out.iterations;
    }
    // report the snapped cell that actually achieves the target
    out.area = r_hi.x_cells.length() * r_hi.y_cells.length();
    out.area_over_h = out.area / h;
    out.a0 = r_hi.a0;
    out.bound = h * target * target;
    return out;
}

bool PeriodicSetFunction::contains(double x) const {
    double r = x - period * std::floor(x / period);
    const double tol = 1e-9 * period;
    if (r > period - tol) {
        r = 0.0;
    }
    for (const auto &iv : cell) {
        if (r >= iv.lo - tol && r < iv.hi - tol) {
            return true;
        }
    }
    return false;
}

void PeriodicSetFunction::validate() const {
    require(period > 0.0, ErrorKind::parameter, "period must be positive");
    auto parts = cell;
    std::sort(parts.begin(), parts.end(), [](const Interval &a, const Interval &b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < parts.size(); ++i) {
        require(parts[i].lo >= -1e-12 && parts[i].hi <= period * (1 + 1e-12) && parts[i].lo < parts[i].hi,
                ErrorKind::parameter, "periodic set parts must lie inside one period cell");
        if (i > 0) {
            require(parts[i].lo >= parts[i - 1].hi - 1e-12, ErrorKind::parameter,
                    "periodic set parts overlap");
        }
    }
}

namespace {

bool near_integer(double v, double tol = 1e-9) {
    return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v));
}

} // namespace

CommutatorResult periodic_commutator(const GridSpec &grid, const PeriodicSetFunction &g,
                                     const PeriodicSetFunction &h) {
    check_matrix_grid(grid);
    g.validate();
    h.validate();
    const std::size_t n = grid.n_points;
    const double p_window = grid.dp() * static_cast<double>(n);
    const bool commensurate = near_integer(g.period / grid.dx) && near_integer(grid.length() / g.period) &&
                              near_integer(h.period / grid.dp()) && near_integer(p_window / h.period);
    if (!commensurate) {
        std::ostringstream os;
        os << "grid (dx=" << grid.dx << ", L=" << grid.length() << ", dp=" << grid.dp()
           << ") is not commensurate with periods " << g.period << " and " << h.period;
        fail(ErrorKind::commensurability, os.str());
    }
    require(grid.length() / g.period >= 8.0 - 1e-9 && p_window / h.period >= 8.0 - 1e-9,
            ErrorKind::commensurability, "window must span at least 8 periods of each function");

    std::vector<double> gx(n);
    std::vector<bool> hp(n);
    for (std::size_t j = 0; j < n; ++j) {
        gx[j] = g.contains(grid.x(j)) ? 1.0 : 0.0;
        hp[j] = h.contains(grid.p(j));
    }
    const auto col = momentum_projector_column(grid, hp);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dg = gx[i] - gx[j];
            if (dg != 0.0) {
                norm = std::max(norm, std::abs(col[(i + n - j) % n]));
            }
        }
    }
    CommutatorResult r;
    r.norm = norm;
    r.ratio = two_pi * grid.hbar / (g.period * h.period);
    r.commute_predicted = near_integer(r.ratio) && std::round(r.ratio) >= 1.0;
    if (norm < commute_threshold) {
        r.verdict = CommutationVerdict::commute;
    } else if (norm > noncommute_threshold) {
        r.verdict = CommutationVerdict::noncommute;
    } else {
        r.verdict = CommutationVerdict::inconclusive;
    }
    return r;
}

} // namespace ulab
