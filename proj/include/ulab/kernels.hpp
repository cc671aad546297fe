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

// Data-parallel inner loops. Each kernel has a serial reference path and an
// OpenMP path that must agree bit-for-bit: every parallel iteration writes its
// own output slot and no floating-point reduction crosses threads.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ulab/grid.hpp"

namespace ulab::kernels {

enum class Backend { serial, openmp };

/// Rows of |F(w(. - q_s) psi)|^2 for q_s = x_{rows[r]}, with F the grid
/// transform. `window[i]` holds w(x_i); the grid must be symmetric with an
/// even point count so that x_j - x_s is again a grid point (cyclically).
/// Returns rows.size() * n values, row-major.
std::vector<double> spectrogram(const GridSpec &grid, std::span<const cplx> window,
                                std::span<const cplx> psi, std::span<const std::size_t> rows,
                                Backend backend);

/// Full linear convolution, out[k] = scale * sum_i a[i] b[k - i].
std::vector<double> convolve(std::span<const double> a, std::span<const double> b, double scale,
                             Backend backend);

enum class Direction { to_momentum, to_position };

/// Applies the grid transform along one axis of a row-major 3-D tensor.
void transform_axis(std::vector<cplx> &tensor, const std::array<std::size_t, 3> &dims,
                    std::size_t axis, const GridSpec &grid, Direction dir, Backend backend);

} // namespace ulab::kernels
