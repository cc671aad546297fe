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

#include "ulab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ulab/error.hpp"

namespace ulab {

WaveFunction gaussian(const GridSpec &grid, double a, double b, double boost, double shift) {
    require(a > 0.0 && std::isfinite(a), ErrorKind::parameter, "Gaussian width parameter a must be > 0");
    grid.validate();
    const double amp = std::pow(2.0 * a / std::numbers::pi, 0.25);
    std::vector<cplx> v(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double x = grid.x(j);
        const double y = x - shift;
        v[j] = amp * std::exp(cplx(-a * y * y, -b * y * y + boost * x));
    }
    auto psi = WaveFunction::normalized(grid, std::move(v), Rep::position);
    const double leak = std::max(boundary_mass(psi), boundary_mass(to_momentum(psi)));
    if (leak > boundary_mass_limit) {
        std::ostringstream os;
        os << "Gaussian (a=" << a << ", b=" << b << ", c=" << boost << ", d=" << shift
           << ") has mass " << leak << " in the outer 5% of the window";
        fail(ErrorKind::aliasing, os.str());
    }
    return psi;
}

SnappedRange snap_box(const GridSpec &grid, double center, double width) {
    require(width > 0.0, ErrorKind::parameter, "box width must be positive");
    require(width >= 4.0 * grid.dx * (1.0 - 1e-9), ErrorKind::resolution,
            "box narrower than 4 grid cells");
    const double lo = center - 0.5 * width;
    const double hi = center + 0.5 * width;
    const double tol = 1e-9 * grid.dx;
    const double first_f = std::ceil((lo - grid.x_min - tol) / grid.dx);
    const double end_f = std::ceil((hi - grid.x_min - tol) / grid.dx);
    require(first_f >= 0.0 && end_f <= static_cast<double>(grid.n_points), ErrorKind::range,
            "box extends outside the grid window");
    SnappedRange r;
    r.first = static_cast<std::size_t>(first_f);
    r.count = static_cast<std::size_t>(end_f - first_f);
    require(r.count > 0, ErrorKind::degenerate_set, "box contains no grid points");
    r.cells.lo = grid.x(r.first) - 0.5 * grid.dx;
    r.cells.hi = grid.x(r.first + r.count - 1) + 0.5 * grid.dx;
    return r;
}

WaveFunction box(const GridSpec &grid, double center, double width) {
    grid.validate();
    const auto r = snap_box(grid, center, width);
    std::vector<cplx> v(grid.n_points, cplx{0.0, 0.0});
    for (std::size_t j = r.first; j < r.first + r.count; ++j) {
        v[j] = 1.0;
    }
    return WaveFunction::normalized(grid, std::move(v), Rep::position);
}

WaveFunction momentum_box(const GridSpec &grid, double center, double width) {
    grid.validate();
    // Reuse the position snapping on a stand-in grid whose "x" is momentum.
    GridSpec pg = grid;
    pg.dx = grid.dp();
    pg.x_min = grid.p_min();
    const auto r = snap_box(pg, center, width);
    std::vector<cplx> v(grid.n_points, cplx{0.0, 0.0});
    for (std::size_t k = r.first; k < r.first + r.count; ++k) {
        v[k] = 1.0;
    }
    return to_position(WaveFunction::normalized(grid, std::move(v), Rep::momentum));
}

WaveFunction random_superposition(const GridSpec &grid, std::mt19937_64 &rng, int max_terms) {
    const double scale = grid.length() / 40.0;
    std::uniform_int_distribution<int> terms(1, std::max(1, max_terms));
    std::uniform_real_distribution<double> ua(0.3, 2.0), ub(-1.0, 1.0), uc(-2.0, 2.0),
        ud(-3.0, 3.0), uphase(0.0, 2.0 * std::numbers::pi), umag(0.2, 1.0);
    const int m = terms(rng);
    std::vector<cplx> v(grid.n_points, cplx{0.0, 0.0});
    for (int t = 0; t < m; ++t) {
        // widths scale with the window so wider grids admit the same shapes
        const double a = ua(rng) / (scale * scale);
        const double b = ub(rng) / (scale * scale);
        const double c = uc(rng) / scale;
        const double d = ud(rng) * scale;
        const cplx w = std::polar(umag(rng), uphase(rng));
        const double amp = std::pow(2.0 * a / std::numbers::pi, 0.25);
        for (std::size_t j = 0; j < grid.n_points; ++j) {
            const double x = grid.x(j);
            const double y = x - d;
            v[j] += w * amp * std::exp(cplx(-a * y * y, -b * y * y + c * x));
        }
    }
    return WaveFunction::normalized(grid, std::move(v), Rep::position);
}

namespace {

std::vector<std::pair<double, WaveFunction>> eigen_components(const GridSpec &grid,
                                                               const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m * grid.dx);
    require(es.info() == Eigen::Success, ErrorKind::numerical, "density-matrix eigensolve failed");
    const auto &evals = es.eigenvalues();
    require(evals.minCoeff() >= -1e-10, ErrorKind::parameter, "density matrix is not positive");
    std::vector<std::pair<double, WaveFunction>> out;
    const std::size_t n = grid.n_points;
    for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {
        if (evals(i) <= 1e-12) {
            break;
        }
        std::vector<cplx> v(n);
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = es.eigenvectors()(static_cast<Eigen::Index>(j), i);
        }
        out.emplace_back(evals(i), WaveFunction::normalized(grid, std::move(v), Rep::position));
    }
    return out;
}

void check_matrix_shape(const GridSpec &grid, const Eigen::MatrixXcd &m) {
    grid.validate();
    require(grid.n_points <= max_matrix_points, ErrorKind::cost,
            "matrix-valued work is limited to 1024 grid points");
    require(static_cast<std::size_t>(m.rows()) == grid.n_points &&
                static_cast<std::size_t>(m.cols()) == grid.n_points,
            ErrorKind::parameter, "density matrix size does not match the grid");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    require(herm <= 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()), ErrorKind::parameter,
            "density matrix is not Hermitian");
    const double tr = m.trace().real() * grid.dx;
    require(std::abs(tr - 1.0) <= 1e-8, ErrorKind::parameter, "density matrix trace*dx != 1");
}

} // namespace

DensityMatrix::DensityMatrix(GridSpec grid, Eigen::MatrixXcd matrix)
    : grid_(grid), m_(std::move(matrix)) {
    check_matrix_shape(grid_, m_);
    components_ = eigen_components(grid_, m_);
}

DensityMatrix::DensityMatrix(GridSpec grid, Eigen::MatrixXcd matrix,
                             std::vector<std::pair<double, WaveFunction>> components)
    : grid_(grid), m_(std::move(matrix)), components_(std::move(components)) {
    check_matrix_shape(grid_, m_);
}

double DensityMatrix::trace() const { return m_.trace().real(); }

DensityMatrix DensityMatrix::parity_conjugated() const {
    require(grid_.is_symmetric(), ErrorKind::grid_symmetry, "parity requires a symmetric grid");
    const auto n = static_cast<Eigen::Index>(grid_.n_points);
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = m_((n - i) % n, (n - j) % n);
        }
    }
    std::vector<std::pair<double, WaveFunction>> comps;
    for (const auto &[w, phi] : components_) {
        comps.emplace_back(w, ulab::parity(phi));
    }
    return DensityMatrix(grid_, std::move(out), std::move(comps));
}

DensityMatrix pure_density(const WaveFunction &phi) {
    const auto x = in_rep(phi, Rep::position);
    const auto n = static_cast<Eigen::Index>(x.size());
    require(x.size() <= max_matrix_points, ErrorKind::cost,
            "matrix-valued work is limited to 1024 grid points");
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = x.amplitudes()[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXcd m = v * v.adjoint();
    return DensityMatrix(x.grid(), std::move(m), {{1.0, x}});
}

DensityMatrix mixed_density(const std::vector<std::pair<double, WaveFunction>> &terms) {
    require(!terms.empty(), ErrorKind::parameter, "mixture needs at least one term");
    const GridSpec grid = terms.front().second.grid();
    const auto n = static_cast<Eigen::Index>(grid.n_points);
    require(grid.n_points <= max_matrix_points, ErrorKind::cost,
            "matrix-valued work is limited to 1024 grid points");
    double total = 0.0;
    for (const auto &[w, phi] : terms) {
        require(w >= 0.0, ErrorKind::parameter, "mixture weights must be nonnegative");
        require(phi.grid().same_as(grid), ErrorKind::grid_mismatch, "mixture terms on different grids");
        total += w;
    }
    require(total > 0.0, ErrorKind::parameter, "mixture weights sum to zero");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &[w, phi] : terms) {
        const auto x = in_rep(phi, Rep::position);
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = x.amplitudes()[static_cast<std::size_t>(i)];
        }
        m += (w / total) * (v * v.adjoint());
    }
    return DensityMatrix(grid, std::move(m));
}

} // namespace ulab
