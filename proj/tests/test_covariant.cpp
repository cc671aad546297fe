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
#include "ulab/covariant.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using kernels::Backend;

namespace {

const GridSpec grid = GridSpec::centered(256, 32.0);

// Husimi value at (q_s, p_k) from the definition sum_i w_i |<W(q,p) T_i, psi>|^2.
double husimi_direct(const WaveFunction &psi, const CovariantObservable &G, double q, double p) {
    double s = 0.0;
    for (const auto &[w, phi] : G.T.components()) {
        const auto shifted = weyl_shift(phi, q, p);
        s += w * std::norm(inner_product(shifted, psi));
    }
    return s / (2.0 * std::numbers::pi * psi.grid().hbar);
}

} // namespace

TEST_CASE("smear is the brute-force convolution of densities") {
    // densities: weights times spacing sum to one
    ProbabilityDensity d{-1.0, 0.5, {0.2, 0.4, 0.8, 0.6}};
    const auto m = SmearingMeasure::from(ProbabilityDensity{-0.5, 0.5, {1.0, 0.0, 1.0}});
    const auto s = smear(d, m, Backend::serial);
    CHECK_THAT(s.start, WithinAbs(-1.5, 1e-15));
    REQUIRE(s.size() == 6);
    const double ref[] = {0.1, 0.2, 0.5, 0.5, 0.4, 0.3};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK_THAT(s.weights[i], WithinAbs(ref[i], 1e-15));
    }
    CHECK(s.weights == smear(d, m, Backend::openmp).weights);
    CHECK_THAT(m.variance, WithinAbs(0.25, 1e-15));
    CHECK_THAT(m.abs_first_moment, WithinAbs(0.5, 1e-15));
}

TEST_CASE("smearing adds variances") {
    const auto psi = gaussian(grid, 0.8, 0.2, 0.3, 1.0);
    const auto G = gt_from_T(pure_density(gaussian(grid, 0.3, 0.1)));
    const auto d = position_density(psi);
    CHECK_THAT(smear(d, G.mu).variance(), WithinRel(d.variance() + G.mu.variance, 1e-10));
}

TEST_CASE("mu and nu of a Gaussian T") {
    const double a = 0.7;
    const auto G = gt_from_T(pure_density(gaussian(grid, a, 0.0, 0.4, 0.6)));
    // Pi T Pi*: reflected position, and momentum flipped
    CHECK_THAT(G.mu.first_moment, WithinAbs(-0.6, 1e-10));
    CHECK_THAT(G.nu.first_moment, WithinAbs(-0.4, 1e-10));
    CHECK_THAT(G.mu.variance, WithinRel(1 / (4 * a), 1e-10));
    CHECK_THAT(G.nu.variance, WithinRel(a, 1e-10));
}

TEST_CASE("Husimi density: direct oracle, marginals, backends") {
    const auto psi = gaussian(grid, 0.6, 0.3, -0.4, 0.8);
    std::mt19937_64 rng(3);
    const auto T = mixed_density({{0.7, gaussian(grid, 0.5)}, {0.3, random_superposition(grid, rng, 2)}});
    const auto G = gt_from_T(T);
    const auto H = husimi(psi, G, 1, Backend::openmp);
    CHECK(H.weights == husimi(psi, G, 1, Backend::serial).weights);
    CHECK_THAT(H.mass(), WithinAbs(1.0, 1e-10));
    for (auto [i, k] : {std::pair<std::size_t, std::size_t>{128, 128}, {120, 140}, {135, 119}}) {
        CHECK_THAT(H.at(i, k), WithinAbs(husimi_direct(psi, G, H.q0 + H.dq * double(i), H.p0 + H.dp * double(k)), 1e-10));
    }
    CHECK(total_variation(H.marginal_q(), smear(position_density(psi), G.mu)) < 1e-9);
    CHECK(total_variation(H.marginal_p(), smear(momentum_density(psi), G.nu)) < 1e-9);
}

TEST_CASE("Husimi rank limit") {
    std::vector<std::pair<double, WaveFunction>> terms;
    for (int k = 0; k < 9; ++k) {
        terms.emplace_back(1.0 / 9, gaussian(grid, 0.5, 0.0, 0.0, -4.0 + k));
    }
    const auto G = gt_from_T(mixed_density(terms));
    CHECK(test::error_kind([&] { husimi(gaussian(grid, 0.5), G); }) == ErrorKind::cost);
}

TEST_CASE("minimal Gaussian T saturates the product relations") {
    const auto G = gt_from_T(pure_density(gaussian(grid, 0.5)));
    const auto r = inaccuracy_measures(G, 0.05, 0.05);
    CHECK_THAT(r.q.noise * r.p.noise, WithinAbs(0.25, 1e-10));
    CHECK_THAT(r.q.standard_error * r.p.standard_error, WithinAbs(0.5, 1e-10));
    // |q| has a kink at the origin, so the grid sum is only second-order accurate
    CHECK_THAT(r.q.distance * r.p.distance, WithinRel(1.0 / std::numbers::pi, 2e-2));
    for (const auto &c : r.checks) {
        CHECK(c.pass);
        CHECK(is_known_tag(c.tag));
    }
    const auto st = check_covariant_state_ur(gaussian(grid, 0.5), G);
    CHECK_THAT(st.delta_q * st.delta_p, WithinAbs(1.0, 1e-10));
    CHECK_THAT(st.delta_q, WithinRel(st.delta_q_added, 1e-10));
}

TEST_CASE("calibration of a sharp channel is about the box width") {
    const auto ch = sharp_channel(grid, Observable::Q);
    const auto r = error_bar_calibrate(ch, 0.05, 1.0);
    CHECK(r.width >= 1.0 - grid.dx);
    CHECK(r.width <= 1.0 + 3 * grid.dx);
    CHECK(test::error_kind([&] { error_bar_calibrate(ch, 0.05, grid.dx); }) == ErrorKind::resolution);
    CHECK(test::error_kind([&] { error_bar_calibrate(ch, 0.05, 0.5 * grid.length()); }) == ErrorKind::coverage);
}

TEST_CASE("smearing widens the error bar") {
    const auto G = gt_from_T(pure_density(gaussian(grid, 0.5)));
    const auto plain = error_bar_calibrate(sharp_channel(grid, Observable::Q), 0.05, 1.0);
    const auto wide = error_bar_calibrate(smeared_channel(grid, Observable::Q, G.mu), 0.05, 1.0);
    CHECK(wide.width > plain.width);
}

TEST_CASE("Werner product: ground state gives 1/pi, search beats it") {
    CHECK_THAT(werner_product({1.0}), WithinRel(1.0 / std::numbers::pi, 1e-6));
    CHECK_THAT(werner_product({2.0, 0.0, 0.0}), WithinRel(1.0 / std::numbers::pi, 1e-6));
    WernerSearchOptions o;
    o.basis_size = 1;
    CHECK_THAT(werner_constant_search(o).c_est, WithinRel(1.0 / std::numbers::pi, 1e-6));
    o.basis_size = 6;
    o.budget = 2000;
    const auto w = werner_constant_search(o);
    CHECK(w.c_est < 1.0 / std::numbers::pi);
    CHECK(w.c_est > werner_constant * 0.98);
    CHECK(w.evaluations <= 2000);
    CHECK_THAT(werner_product(w.coefficients), WithinRel(w.c_est, 1e-12));
}

TEST_CASE("Werner search is deterministic and backend independent") {
    WernerSearchOptions o;
    o.basis_size = 5;
    o.budget = 800;
    o.backend = Backend::serial;
    const auto a = werner_constant_search(o);
    o.backend = Backend::openmp;
    const auto b = werner_constant_search(o);
    CHECK(a.c_est == b.c_est);
    CHECK(a.coefficients == b.coefficients);
    CHECK(a.best_start == b.best_start);
}

TEST_CASE("Werner basis-state grid route matches the basis route") {
    const auto g = GridSpec::centered(1024, 48.0);
    const std::vector<double> c{1.0, 0.0, 0.3, 0.0, -0.1};
    const auto G = gt_from_T(pure_density(werner_state(g, c)));
    CHECK_THAT(G.mu.abs_first_moment * G.nu.abs_first_moment, WithinRel(werner_product(c), 5e-3));
}

TEST_CASE("Werner distance diagnostic stays below the closed form") {
    const auto G = gt_from_T(pure_density(gaussian(grid, 0.5)));
    const auto ch = smeared_channel(grid, Observable::Q, G.mu);
    const double lower =
        werner_distance_lower_bound(ch, {gaussian(grid, 0.5), box(grid, 0.0, 2.0)}, {0.25, 0.5, 1.0, 2.0});
    CHECK(lower > 0.0);
    CHECK(lower <= G.mu.abs_first_moment + 1e-9);
}

TEST_CASE("monotone maps") {
    const auto f = MonotoneMap::tabulate([](double x) { return x + 0.3 * std::tanh(x); }, -5, 5, 201);
    for (double x : {-7.0, -1.2, 0.0, 0.4, 3.3, 9.0}) {
        CHECK_THAT(f.inverse(f(x)), WithinAbs(x, 1e-12));
    }
    CHECK(test::error_kind([] { MonotoneMap({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}); }) == ErrorKind::parameter);
    CHECK_THAT(MonotoneMap::identity()(2.5), WithinAbs(2.5, 1e-15));
}

TEST_CASE("warped density: change of variables for a linear map") {
    ProbabilityDensity d{-3.0, 0.5, {0, 0, 0, 0, 0.2, 0.4, 0.8, 0.4, 0.2, 0, 0, 0, 0}};
    const MonotoneMap shift({-10.0, 10.0}, {-9.0, 11.0}); // y = x + 1
    const auto w = warp_density(d, shift);
    CHECK_THAT(w.mass(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(w.mean(), WithinAbs(d.mean() + 1.0, 1e-12));
}

TEST_CASE("warped observable is not covariant, plain one is") {
    const auto psi = gaussian(grid, 0.5);
    const auto G = gt_from_T(pure_density(gaussian(grid, 0.5)));
    WarpOptions o;
    o.delta_q = 8 * grid.dx;
    o.delta_p = 8 * grid.dp();
    const auto plain = warp_observable(psi, G, MonotoneMap::identity(), MonotoneMap::identity(), o);
    CHECK(plain.covariant);
    CHECK(plain.covariance_defect < covariance_defect_threshold);
    const auto g1 = MonotoneMap::tabulate([](double x) { return x + 0.3 * std::tanh(x); }, -16, 16, 401);
    const auto warped = warp_observable(psi, G, g1, g1, o);
    CHECK_FALSE(warped.covariant);
    CHECK(warped.covariance_defect > covariance_defect_threshold);
}
