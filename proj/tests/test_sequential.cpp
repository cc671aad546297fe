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
#include "ulab/sequential.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GridSpec grid = GridSpec::centered(256, 32.0);

// A real probe without parity symmetry: two displaced Gaussians.
WaveFunction asymmetric_probe() {
    const auto a = gaussian(grid, 1.5, 0.0, 0.0, -0.6);
    const auto b = gaussian(grid, 0.6, 0.0, 0.0, 0.9);
    std::vector<cplx> v(grid.n_points);
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = 0.8 * a.amplitudes()[j] + 0.5 * b.amplitudes()[j];
    }
    return WaveFunction::normalized(grid, v);
}

// Outcome density at q = x_s directly from the Kraus operator definition.
double outcome_direct(const WaveFunction &probe, double lambda, const WaveFunction &psi, double q) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double x = grid.x(j);
        s += lambda * std::norm(interpolate(probe, lambda * (q - x))) * std::norm(psi.amplitudes()[j]) * grid.dx;
    }
    return s;
}

} // namespace

TEST_CASE("Kraus completeness") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto I = build_instrument(gaussian(grid, 0.5), lambda, grid);
        CHECK(kraus_completeness_error(I) < kraus_tolerance);
    }
    // a strongly dilated probe no longer fits the window
    CHECK(test::error_kind([&] { build_instrument(gaussian(grid, 0.5), 0.05, grid); }) == ErrorKind::probe_validity);
}

TEST_CASE("outcome density: Kraus-operator oracle and smeared form, asymmetric probe") {
    const auto probe = asymmetric_probe();
    const auto psi = gaussian(grid, 0.8, 0.3, 0.5, -1.0);
    for (double lambda : {1.0, 1.7}) {
        const auto I = build_instrument(probe, lambda, grid);
        const auto out = outcome_density(I, psi);
        for (std::size_t s : {100u, 120u, 128u, 150u}) {
            CHECK_THAT(out.weights[s], WithinAbs(outcome_direct(probe, lambda, psi, grid.x(s)), 1e-9));
        }
        const auto mu = measured_mu(I);
        CHECK(total_variation(out, smear(position_density(psi), mu)) < 1e-6);
        // mu(y) = lambda |Psi(lambda y)|^2 has mean <Psi>/lambda
        const double mean = position_density(probe).mean();
        CHECK_THAT(mu.first_moment, WithinAbs(mean / lambda, 1e-8));
    }
}

TEST_CASE("post-measurement momentum is the smeared prior") {
    const auto psi = gaussian(grid, 0.8, 0.3, 0.5, -1.0);
    for (const auto &probe : {gaussian(grid, 0.5), asymmetric_probe()}) {
        const auto I = build_instrument(probe, 1.3, grid);
        const auto d = disturbance_report(I, psi);
        CHECK(d.m1_defect < 1e-6);
        CHECK(d.m2_defect < 1e-6);
        CHECK_THAT(d.post_momentum.variance(), WithinRel(d.prior_momentum.variance() + d.nu.variance, 1e-8));
        for (const auto &c : d.checks) {
            CHECK(c.pass);
        }
    }
}

TEST_CASE("sequential joint density equals the Davies Husimi density") {
    const auto psi = gaussian(grid, 0.8, 0.3, 0.5, -1.0);
    for (const auto &probe : {gaussian(grid, 0.5), asymmetric_probe()}) {
        const auto I = build_instrument(probe, 1.0, grid);
        const auto joint = sequential_joint(I, psi, kernels::Backend::openmp);
        CHECK(joint.weights == sequential_joint(I, psi, kernels::Backend::serial).weights);
        const auto H = husimi(psi, gt_from_T(pure_density(davies_state(I))));
        double diff = 0.0;
        for (std::size_t i = 0; i < H.weights.size(); ++i) {
            diff = std::max(diff, std::abs(joint.weights[i] - H.weights[i]));
        }
        CHECK(diff < 1e-10);
        CHECK_THAT(joint.mass(), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("posterior states") {
    const auto psi = gaussian(grid, 0.8);
    const auto I = build_instrument(gaussian(grid, 0.5), 1.0, grid);
    const auto out = outcome_density(I, psi);
    const auto post = posterior_state(I, psi, grid.x(130));
    CHECK_THAT(post.state.norm(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(post.density, WithinRel(out.weights[130], 1e-9));
    CHECK(test::error_kind([&] { posterior_state(I, psi, grid.x(130) + 0.3 * grid.dx); }) == ErrorKind::range);
}

TEST_CASE("outcome bins sum to one") {
    const auto I = build_instrument(gaussian(grid, 0.5), 1.0, grid, 4);
    const auto b = bin_probabilities(I, gaussian(grid, 0.8));
    double s = 0.0;
    for (double v : b) {
        s += v;
    }
    CHECK_THAT(s, WithinAbs(1.0, 1e-9));
    CHECK(b.size() == grid.n_points / 4);
}
