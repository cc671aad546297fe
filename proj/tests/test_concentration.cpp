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
#include <random>

#include "support.hpp"
#include "ulab/concentration.hpp"
#include "ulab/stats.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("momentum projector equals the discrete sinc kernel") {
    const auto g = GridSpec::centered(64, 12.0, 0.9);
    const Interval y{-1.0, 2.2};
    const auto P = projector_momentum(g, y);
    const auto ks = snapped_indices(g.p_min(), g.dp(), g.n_points, y);
    REQUIRE(!ks.empty());
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        for (std::size_t l = 0; l < g.n_points; ++l) {
            cplx ref = 0.0;
            for (auto k : ks) {
                ref += std::polar(1.0, g.p(k) * (g.x(j) - g.x(l)) / g.hbar);
            }
            ref /= static_cast<double>(g.n_points);
            worst = std::max(worst, std::abs(P.matrix(j, l) - ref));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("projectors are Hermitian idempotents with the counted trace") {
    const auto g = GridSpec::centered(96, 16.0);
    const auto Q = projector_position(g, {{-2.0, 1.0}, {3.0, 4.5}});
    const auto P = projector_momentum(g, {-0.7, 1.9});
    for (const auto *M : {&Q, &P}) {
        CHECK((M->matrix - M->matrix.adjoint()).norm() < 1e-12);
        CHECK((M->matrix * M->matrix - M->matrix).norm() < 1e-11);
    }
    const auto nq = snapped_indices(g.x_min, g.dx, g.n_points, {-2.0, 1.0}).size() +
                    snapped_indices(g.x_min, g.dx, g.n_points, {3.0, 4.5}).size();
    CHECK_THAT(Q.matrix.trace().real(), WithinAbs(double(nq), 1e-12));
    CHECK(test::error_kind([&] { projector_position(g, {{0.01, 0.02}}); }) == ErrorKind::degenerate_set);
}

TEST_CASE("a0 grows with the cell area and stays below one and the trace") {
    const auto g = GridSpec::centered(256, 30.0);
    double prev = 0.0;
    for (double u = 0.25; u <= 6.0; u += 0.25) {
        const auto [x, y] = cell_for_area(g, u * two_pi);
        const auto r = largest_a0(g, x, y);
        CHECK(r.a0 >= prev - 1e-12);
        CHECK(r.a0 <= 1.0 + 1e-12);
        CHECK(r.a0 <= r.trace + 1e-12);
        prev = r.a0;
    }
}

TEST_CASE("both localization routes agree and the maximizer realizes the value") {
    const auto g = GridSpec::centered(128, 20.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> len(0.5, 3.0), off(-2.0, 2.0);
    for (int k = 0; k < 5; ++k) {
        const double cx = off(rng), lx = len(rng), cy = off(rng), ly = len(rng);
        const Interval x{cx - lx / 2, cx + lx / 2}, y{cy - ly / 2, cy + ly / 2};
        const auto a = largest_a0(g, x, y);
        const auto loc = optimal_localization(g, x, y);
        CHECK_THAT(loc.value, WithinAbs(1.0 + std::sqrt(a.a0), 1e-9));
        CHECK_THAT(loc.prob_q + loc.prob_p, WithinAbs(loc.value, 1e-9));
        CHECK_THAT(position_density(loc.state).probability(x.lo, x.hi - 1e-12), WithinAbs(loc.prob_q, 1e-9));
    }
}

TEST_CASE("area 6.25 x 2 pi hbar reaches the 0.01/0.01 regime") {
    const auto g = GridSpec::centered(512, 40.0);
    const auto [x, y] = cell_for_area(g, 6.25 * two_pi);
    const auto a = largest_a0(g, x, y);
    CHECK(1.0 + std::sqrt(a.a0) >= 1.98);
}

TEST_CASE("minimum confident area is bracketed by the bisection") {
    const auto g = GridSpec::centered(256, 30.0);
    const auto m = min_area_for_confidence(g, 0.05, 0.05);
    CHECK(std::sqrt(m.a0) >= 0.9 - 1e-12);
    CHECK(m.area >= m.bound);
    const auto [x, y] = cell_for_area(g, 0.75 * m.area);
    CHECK(std::sqrt(largest_a0(g, x, y).a0) < 0.9);
    CHECK(test::error_kind([&] { min_area_for_confidence(g, 0.6, 0.5); }) == ErrorKind::parameter);
}

TEST_CASE("periodic commutation follows the integer ratio rule") {
    const auto g = GridSpec::centered(520, 20.0);
    const PeriodicSetFunction ga{1.0, {{0.0, 0.5}}};
    const auto with = [&](double u) {
        return periodic_commutator(g, ga, PeriodicSetFunction{u * two_pi, {{0.0, 0.5 * u * two_pi}}});
    };
    CHECK(with(1.0).norm < commute_threshold);
    CHECK(with(0.5).norm < commute_threshold);
    const auto nc = with(1.3);
    CHECK_FALSE(nc.commute_predicted);
    CHECK(nc.norm > noncommute_threshold);
    CHECK(nc.verdict == CommutationVerdict::noncommute);
    const PeriodicSetFunction odd{0.37, {{0.0, 0.1}}};
    CHECK(test::error_kind([&] { periodic_commutator(g, odd, ga); }) == ErrorKind::commensurability);
}
