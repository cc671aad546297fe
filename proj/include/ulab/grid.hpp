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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ulab {

using cplx = std::complex<double>;

/// Uniform periodic 1-D grid. Positions are x_j = x_min + j*dx and the derived
/// momentum grid is p_k = (k - n/2)*dp with dp = 2*pi*hbar/(n*dx), i.e.
/// centered and monotone. hbar is carried here so every quantity computed on
/// a grid shares one convention.
struct GridSpec {
    std::size_t n_points = 0;
    double x_min = 0.0;
    double dx = 0.0;
    double hbar = 1.0;

    /// Grid on [-length/2, length/2) with n points; symmetric under parity.
    static GridSpec centered(std::size_t n, double length, double hbar = 1.0);

    [[nodiscard]] double length() const { return dx * static_cast<double>(n_points); }
    [[nodiscard]] double dp() const;
    [[nodiscard]] double x(std::size_t j) const { return x_min + dx * static_cast<double>(j); }
    [[nodiscard]] double p(std::size_t k) const;
    [[nodiscard]] double p_min() const { return p(0); }
    [[nodiscard]] std::size_t momentum_origin() const { return n_points / 2; }
    [[nodiscard]] bool is_symmetric() const;
    [[nodiscard]] bool same_as(const GridSpec &other) const;

    /// Throws parameter error unless n >= 16, dx > 0, hbar > 0.
    void validate() const;
};

enum class Rep { position, momentum };

/// Normalized amplitudes on a grid; |psi_j|^2 * spacing sums to one.
class WaveFunction {
  public:
    WaveFunction() = default;
    /// Checks the normalization invariant (1e-9).
    WaveFunction(GridSpec grid, std::vector<cplx> amplitudes, Rep rep);

    /// Rescales the amplitudes to unit norm; rejects zero vectors.
    static WaveFunction normalized(GridSpec grid, std::vector<cplx> amplitudes,
                                   Rep rep = Rep::position);

    [[nodiscard]] const GridSpec &grid() const { return grid_; }
    [[nodiscard]] const std::vector<cplx> &amplitudes() const { return amps_; }
    [[nodiscard]] Rep rep() const { return rep_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] double spacing() const;
    [[nodiscard]] double coordinate(std::size_t i) const;
    [[nodiscard]] double norm() const;

  private:
    GridSpec grid_{};
    std::vector<cplx> amps_;
    Rep rep_ = Rep::position;
};

// Raw unitary transform between position samples and momentum samples on
// `grid`:  out_k = dx/sqrt(2 pi hbar) * sum_j in_j exp(-i p_k x_j / hbar).
// `in` and `out` may alias.
void forward_transform(const GridSpec &grid, std::span<const cplx> in, std::span<cplx> out);
void inverse_transform(const GridSpec &grid, std::span<const cplx> in, std::span<cplx> out);

WaveFunction to_momentum(const WaveFunction &psi);
WaveFunction to_position(const WaveFunction &psi);
WaveFunction in_rep(const WaveFunction &psi, Rep rep);

/// Probability mass in the outer 5% of the window on either side.
double boundary_mass(const WaveFunction &psi);
constexpr double boundary_mass_limit = 1e-10;

/// W(q,p) psi with W(q,p) = exp(i q p/2hbar) exp(-i q P/hbar) exp(i p Q/hbar).
/// Emits a boundary-aliasing warning when the result leaks into the outer 5%.
WaveFunction weyl_shift(const WaveFunction &psi, double q, double p);

/// (Pi psi)(x) = psi(-x); requires a symmetric grid.
WaveFunction parity(const WaveFunction &psi);

/// <a, b> in whichever representation both share.
cplx inner_product(const WaveFunction &a, const WaveFunction &b);

/// Band-limited (trigonometric) interpolation of a position-representation
/// state at an arbitrary point; zero outside the window.
cplx interpolate(const WaveFunction &psi, double x);

} // namespace ulab
