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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "ulab/grid.hpp"
#include "ulab/states.hpp"
#include "ulab/stats.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;

namespace {

// Direct O(n^2) sum of the transform definition.
std::vector<cplx> naive_forward(const GridSpec &g, const std::vector<cplx> &in) {
    std::vector<cplx> out(g.n_points);
    const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi * g.hbar);
    for (std::size_t k = 0; k < g.n_points; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < g.n_points; ++j) {
            s += in[j] * std::polar(1.0, -g.p(k) * g.x(j) / g.hbar);
        }
        out[k] = scale * s;
    }
    return out;
}

} // namespace

TEST_CASE("momentum grid is centred with dp = 2 pi hbar / (n dx)") {
    const auto g = GridSpec::centered(64, 8.0, 0.7);
    CHECK_THAT(g.dp(), WithinAbs(2.0 * std::numbers::pi * 0.7 / 8.0, 1e-15));
    CHECK_THAT(g.p(32), WithinAbs(0.0, 1e-15));
    CHECK_THAT(g.x(32), WithinAbs(0.0, 1e-15));
    CHECK(g.is_symmetric());
    CHECK_FALSE((GridSpec{64, -3.0, 0.1, 1.0}).is_symmetric());
}

TEST_CASE("grid validation") {
    CHECK(test::error_kind([] { GridSpec{8, 0.0, 0.1, 1.0}.validate(); }) == ErrorKind::parameter);
    CHECK(test::error_kind([] { GridSpec{64, 0.0, -0.1, 1.0}.validate(); }) == ErrorKind::parameter);
    CHECK(test::error_kind([] { GridSpec{64, 0.0, 0.1, 0.0}.validate(); }) == ErrorKind::parameter);
}

TEST_CASE("FFT transform matches the direct sum, including an off-centre window") {
    for (const auto &g : {GridSpec::centered(48, 12.0, 1.0), GridSpec{40, -2.3, 0.21, 0.5}}) {
        std::vector<cplx> in(g.n_points);
        for (std::size_t j = 0; j < in.size(); ++j) {
            in[j] = cplx(std::sin(0.3 * double(j)), std::cos(0.11 * double(j * j)));
        }
        std::vector<cplx> out(in.size());
        forward_transform(g, in, out);
        const auto ref = naive_forward(g, in);
        for (std::size_t k = 0; k < in.size(); ++k) {
            CHECK(std::abs(out[k] - ref[k]) < 1e-11);
        }
        std::vector<cplx> back(in.size());
        inverse_transform(g, out, back);
        for (std::size_t j = 0; j < in.size(); ++j) {
            CHECK(std::abs(back[j] - in[j]) < 1e-12);
        }
    }
}

TEST_CASE("Gaussian transform matches the closed form") {
    // eta_{a,0} has momentum amplitude (2a/pi)^{1/4} / sqrt(2 a hbar) exp(-p^2 / (4 a hbar^2)).
    const double a = 0.7, hbar = 0.8;
    const auto g = GridSpec::centered(256, 30.0, hbar);
    const auto phat = to_momentum(gaussian(g, a));
    double worst = 0.0;
    for (std::size_t k = 0; k < g.n_points; ++k) {
        const double p = g.p(k);
        const double ref = std::pow(2 * a / std::numbers::pi, 0.25) / std::sqrt(2 * a * hbar) *
                           std::exp(-p * p / (4 * a * hbar * hbar));
        worst = std::max(worst, std::abs(std::abs(phat.amplitudes()[k]) - ref));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("parity commutes with the transform and squares to one") {
    const auto g = GridSpec::centered(128, 20.0);
    const auto psi = gaussian(g, 0.6, 0.2, 0.7, 1.1);
    const auto a = to_momentum(parity(psi));
    const auto b = parity(to_momentum(psi));
    for (std::size_t k = 0; k < g.n_points; ++k) {
        CHECK(std::abs(a.amplitudes()[k] - b.amplitudes()[k]) < 1e-12);
    }
    const auto pp = parity(parity(psi));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        CHECK(std::abs(pp.amplitudes()[j] - psi.amplitudes()[j]) < 1e-15);
    }
    CHECK(test::error_kind([] {
              const GridSpec off{64, -3.0, 0.1, 1.0};
              parity(WaveFunction::normalized(off, std::vector<cplx>(64, 1.0)));
          }) == ErrorKind::grid_symmetry);
}

TEST_CASE("Weyl shift translates both means") {
    const auto g = GridSpec::centered(512, 40.0);
    const auto psi = gaussian(g, 0.5, 0.1);
    const auto s = weyl_shift(psi, 1.5, -0.8);
    CHECK_THAT(expectation(s, Observable::Q), WithinAbs(1.5, 1e-9));
    CHECK_THAT(expectation(s, Observable::P), WithinAbs(-0.8, 1e-9));
    CHECK_THAT(stddev(s, Observable::Q), WithinAbs(stddev(psi, Observable::Q), 1e-9));
}

TEST_CASE("normalization invariant and boundary mass") {
    const auto g = GridSpec::centered(64, 10.0);
    CHECK(test::error_kind([&] { WaveFunction(g, std::vector<cplx>(64, 1.0), Rep::position); }) ==
          ErrorKind::parameter);
    CHECK(test::error_kind([&] { WaveFunction::normalized(g, std::vector<cplx>(64, 0.0)); }).has_value());
    const auto psi = gaussian(g, 1.0);
    CHECK(boundary_mass(psi) < boundary_mass_limit);
    CHECK(test::error_kind([] { gaussian(GridSpec::centered(64, 10.0), 0.01); }) == ErrorKind::aliasing);
}

TEST_CASE("band-limited interpolation reproduces samples and is accurate between them") {
    const auto g = GridSpec::centered(256, 30.0);
    const auto psi = gaussian(g, 0.5, 0.0, 0.4);
    for (std::size_t j : {3u, 100u, 128u, 200u}) {
        CHECK(std::abs(interpolate(psi, g.x(j)) - psi.amplitudes()[j]) < 1e-12);
    }
    const double x = 0.3 * g.dx + 0.77;
    const cplx ref = std::pow(1.0 / std::numbers::pi, 0.25) * std::exp(-0.5 * x * x) * std::polar(1.0, 0.4 * x);
    CHECK(std::abs(interpolate(psi, x) - ref) < 1e-10);
    CHECK(interpolate(psi, 100.0) == cplx(0.0));
}
