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

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ulab/grid.hpp"

namespace ulab {

/// exp(i c x) * eta_{a,b}(x - d), eta_{a,b}(x) = (2a/pi)^{1/4} exp(-(a + i b) x^2).
/// Throws aliasing error when the state has more than 1e-10 mass in the outer
/// 5% of either window.
WaveFunction gaussian(const GridSpec &grid, double a, double b = 0.0, double boost = 0.0,
                      double shift = 0.0);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double length() const { return hi - lo; }
};

/// Cells of the grid points x_j in [center - width/2, center + width/2).
struct SnappedRange {
    std::size_t first = 0;
    std::size_t count = 0;
    Interval cells;
};

SnappedRange snap_box(const GridSpec &grid, double center, double width);

/// Uniform modulus on the snapped box, zero outside.
WaveFunction box(const GridSpec &grid, double center, double width);

/// Same construction in the momentum representation (returned in position rep).
WaveFunction momentum_box(const GridSpec &grid, double center, double width);

/// Random superposition of 1..max_terms Gaussians with random complex weights.
/// Parameters stay inside ranges that respect the boundary-mass rule on a
/// window of at least 40 (hbar = 1 units).
WaveFunction random_superposition(const GridSpec &grid, std::mt19937_64 &rng, int max_terms = 5);

/// Dense positive trace-one operator in the position representation,
/// normalized so that trace * dx = 1.
class DensityMatrix {
  public:
    DensityMatrix(GridSpec grid, Eigen::MatrixXcd matrix);

    [[nodiscard]] const GridSpec &grid() const { return grid_; }
    [[nodiscard]] const Eigen::MatrixXcd &matrix() const { return m_; }
    [[nodiscard]] double trace() const;

    /// Weighted orthonormal components (weight, state) with weight > 1e-12,
    /// ordered by decreasing weight.
    [[nodiscard]] const std::vector<std::pair<double, WaveFunction>> &components() const {
        return components_;
    }

    /// Pi T Pi*.
    [[nodiscard]] DensityMatrix parity_conjugated() const;

  private:
    friend DensityMatrix pure_density(const WaveFunction &phi);
    DensityMatrix(GridSpec grid, Eigen::MatrixXcd matrix,
                  std::vector<std::pair<double, WaveFunction>> components);

    GridSpec grid_;
    Eigen::MatrixXcd m_;
    std::vector<std::pair<double, WaveFunction>> components_;
};

constexpr std::size_t max_matrix_points = 1024;

DensityMatrix pure_density(const WaveFunction &phi);
DensityMatrix mixed_density(const std::vector<std::pair<double, WaveFunction>> &terms);

} // namespace ulab
