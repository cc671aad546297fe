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

#include "ulab/kernels.hpp"

#include <algorithm>

#include "ulab/error.hpp"

namespace ulab::kernels {

namespace {

void spectrogram_row(const GridSpec &grid, std::span<const cplx> window, std::span<const cplx> psi,
                     std::size_t s, std::span<double> out, std::vector<cplx> &buf) {
    const std::size_t n = grid.n_points;
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        buf[j] = window[(j + n + half - s) % n] * psi[j];
    }
    forward_transform(grid, buf, buf);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = std::norm(buf[k]);
    }
}

void transform_line(std::vector<cplx> &t, std::size_t base, std::size_t stride, const GridSpec &grid,
                    Direction dir, std::vector<cplx> &buf) {
    const std::size_t n = grid.n_points;
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = t[base + i * stride];
    }
    if (dir == Direction::to_momentum) {
        forward_transform(grid, buf, buf);
    } else {
        inverse_transform(grid, buf, buf);
    }
    for (std::size_t i = 0; i < n; ++i) {
        t[base + i * stride] = buf[i];
    }
}

} // namespace

std::vector<double> spectrogram(const GridSpec &grid, std::span<const cplx> window,
                                std::span<const cplx> psi, std::span<const std::size_t> rows,
                                Backend backend) {
    const std::size_t n = grid.n_points;
    require(grid.is_symmetric() && n % 2 == 0, ErrorKind::grid_symmetry,
            "windowed transform needs a symmetric grid with an even point count");
    require(window.size() == n && psi.size() == n, ErrorKind::parameter, "window/state size mismatch");
    for (std::size_t s : rows) {
        require(s < n, ErrorKind::range, "row index outside the grid");
    }
    std::vector<double> out(rows.size() * n);
    const auto nrows = static_cast<long long>(rows.size());
    if (backend == Backend::serial) {
        std::vector<cplx> buf(n);
        for (long long r = 0; r < nrows; ++r) {
            const auto ru = static_cast<std::size_t>(r);
            spectrogram_row(grid, window, psi, rows[ru], std::span(out).subspan(ru * n, n), buf);
        }
    } else {
#pragma omp parallel
        {
            std::vector<cplx> buf(n);
#pragma omp for schedule(static)
            for (long long r = 0; r < nrows; ++r) {
                const auto ru = static_cast<std::size_t>(r);
                spectrogram_row(grid, window, psi, rows[ru], std::span(out).subspan(ru * n, n), buf);
            }
        }
    }
    return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b, double scale,
                             Backend backend) {
    if (a.empty() || b.empty()) {
        return {};
    }
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    std::vector<double> out(na + nb - 1, 0.0);
    const auto nout = static_cast<long long>(out.size());
    auto one = [&](long long kk) {
        const auto k = static_cast<std::size_t>(kk);
        const std::size_t i_lo = k >= nb - 1 ? k - (nb - 1) : 0;
        const std::size_t i_hi = std::min(k, na - 1);
        double s = 0.0;
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            s += a[i] * b[k - i];
        }
        out[k] = scale * s;
    };
    if (backend == Backend::serial) {
        for (long long k = 0; k < nout; ++k) {
            one(k);
        }
    } else {
#pragma omp parallel for schedule(static)
        for (long long k = 0; k < nout; ++k) {
            one(k);
        }
    }
    return out;
}

void transform_axis(std::vector<cplx> &tensor, const std::array<std::size_t, 3> &dims,
                    std::size_t axis, const GridSpec &grid, Direction dir, Backend backend) {
    require(axis < 3, ErrorKind::parameter, "axis must be 0, 1 or 2");
    require(dims[axis] == grid.n_points, ErrorKind::grid_mismatch, "axis length differs from grid");
    require(tensor.size() == dims[0] * dims[1] * dims[2], ErrorKind::parameter, "tensor size mismatch");
    const std::array<std::size_t, 3> strides{dims[1] * dims[2], dims[2], 1};
    const std::size_t stride = strides[axis];
    // the two remaining axes enumerate the independent lines
    std::array<std::size_t, 2> other{};
    std::size_t o = 0;
    for (std::size_t a = 0; a < 3; ++a) {
        if (a != axis) {
            other[o++] = a;
        }
    }
    const std::size_t n_outer = dims[other[0]];
    const std::size_t n_inner = dims[other[1]];
    const auto lines = static_cast<long long>(n_outer * n_inner);
    auto base_of = [&](long long line) {
        const auto l = static_cast<std::size_t>(line);
        return (l / n_inner) * strides[other[0]] + (l % n_inner) * strides[other[1]];
    };
    if (backend == Backend::serial) {
        std::vector<cplx> buf(grid.n_points);
        for (long long l = 0; l < lines; ++l) {
            transform_line(tensor, base_of(l), stride, grid, dir, buf);
        }
    } else {
#pragma omp parallel
        {
            std::vector<cplx> buf(grid.n_points);
#pragma omp for schedule(static)
            for (long long l = 0; l < lines; ++l) {
                transform_line(tensor, base_of(l), stride, grid, dir, buf);
            }
        }
    }
}

} // namespace ulab::kernels
