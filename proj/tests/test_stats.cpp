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
#include "ulab/states.hpp"
#include "ulab/stats.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Standard normal quantile by bisection on erfc, independent of the library.
double normal_quantile(double u) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("Gaussian moments match the closed forms") {
    // |eta_{a,b}|^2 has variance 1/(4a); the momentum variance is hbar^2 (a^2 + b^2)/a.
    const double hbar = 1.3;
    const auto g = GridSpec::centered(512, 40.0, hbar);
    for (double a : {0.3, 0.5, 1.2}) {
        for (double b : {0.0, 0.4}) {
            const auto psi = gaussian(g, a, b, 0.9, -2.0);
            CHECK_THAT(expectation(psi, Observable::Q), WithinAbs(-2.0, 1e-10));
            CHECK_THAT(expectation(psi, Observable::P), WithinAbs(0.9 * hbar, 1e-10));
            CHECK_THAT(stddev(psi, Observable::Q), WithinRel(std::sqrt(1 / (4 * a)), 1e-10));
            CHECK_THAT(stddev(psi, Observable::P), WithinRel(hbar * std::sqrt((a * a + b * b) / a), 1e-9));
        }
    }
}

TEST_CASE("preparation UR: equality for unchirped Gaussians, strict otherwise") {
    const auto g = GridSpec::centered(512, 40.0, 0.6);
    const auto eq = check_preparation_ur(gaussian(g, 0.8));
    CHECK_THAT(eq.product, WithinAbs(0.3, 1e-10));
    CHECK(eq.pass);
    CHECK_THAT(eq.implied_delta_p_bound, WithinRel(0.3 / eq.delta_q, 1e-12));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 30; ++k) {
        const auto r = check_preparation_ur(random_superposition(g, rng));
        CHECK(r.pass);
        CHECK(r.margin >= -1e-12);
    }
}

TEST_CASE("overall width of a Gaussian matches the two-sided quantile") {
    const auto g = GridSpec::centered(2048, 40.0);
    const auto d = position_density(gaussian(g, 0.5));
    for (double eps : {0.01, 0.05, 0.2}) {
        const auto w = overall_width(d, eps);
        const double ref = 2.0 * std::sqrt(0.5) * normal_quantile(1.0 - eps / 2.0);
        CHECK_THAT(w.width, WithinAbs(ref, 2.0 * g.dx));
        CHECK(w.covered >= 1.0 - eps - 1e-12);
    }
}

TEST_CASE("overall width is minimal: no shorter window carries the mass") {
    const auto g = GridSpec::centered(256, 20.0);
    std::mt19937_64 rng(9);
    const auto d = position_density(random_superposition(g, rng));
    const auto w = overall_width(d, 0.1);
    const double shorter = w.width - d.spacing;
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d.probability(d.coord(i), d.coord(i) + shorter - 0.5 * d.spacing) < 0.9);
    }
}

TEST_CASE("overall width parameter errors") {
    const auto g = GridSpec::centered(64, 10.0);
    const auto d = position_density(gaussian(g, 1.0));
    CHECK(test::error_kind([&] { overall_width(d, 0.0); }) == ErrorKind::parameter);
    CHECK(test::error_kind([&] { overall_width(d, 1.0); }) == ErrorKind::parameter);
}

TEST_CASE("width bounds: Uffink's bound is never weaker") {
    for (double e : {0.01, 0.05, 0.1, 0.2, 0.3}) {
        CHECK(uffink_bound(1.0, e, e) >= overall_width_bound(1.0, e, e) - 1e-12);
    }
    CHECK_THAT(overall_width_bound(2.0, 0.1, 0.1), WithinRel(2.0 * overall_width_bound(1.0, 0.1, 0.1), 1e-12));
}

TEST_CASE("total variation and bin shifts") {
    ProbabilityDensity a{0.0, 1.0, {0.25, 0.5, 0.25}};
    ProbabilityDensity b{1.0, 1.0, {0.25, 0.5, 0.25}};
    CHECK_THAT(total_variation(a, a), WithinAbs(0.0, 1e-15));
    // disjoint-support difference on a shifted grid: |a - b| sums to 1
    CHECK_THAT(total_variation(a, b), WithinAbs(0.5, 1e-15));
    const auto s = shifted_bins(a, 1);
    CHECK_THAT(total_variation(s, b), WithinAbs(0.0, 1e-15));
}

TEST_CASE("target spreads reach the requested values") {
    const auto g = GridSpec::centered(512, 40.0);
    const auto psi = target_spreads(g, 1.0, 0.8);
    CHECK_THAT(stddev(psi, Observable::Q), WithinRel(1.0, 1e-8));
    CHECK_THAT(stddev(psi, Observable::P), WithinRel(0.8, 1e-8));
    CHECK(test::error_kind([&] { target_spreads(g, 1.0, 0.3); }) == ErrorKind::uncertainty_violation);
}
