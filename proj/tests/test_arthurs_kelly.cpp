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

#include "support.hpp"
#include "ulab/arthurs_kelly.hpp"

using namespace ulab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const GridSpec grid = GridSpec::centered(64, 20.0);
}

TEST_CASE("analytic table at the reference point") {
    const auto probe = gaussian(grid, 0.5);
    const auto a = ak_analytic_variances({1.0, 1.0, 0.0}, probe, probe);
    CHECK_THAT(a.mu_var, WithinAbs(0.625, 1e-12));
    CHECK_THAT(a.nu_var, WithinAbs(0.625, 1e-12));
    CHECK_THAT(a.quantum, WithinAbs(0.125, 1e-12));
    CHECK_THAT(a.disturbance, WithinAbs(0.265625, 1e-12));
    CHECK_THAT(a.x, WithinAbs(4.0, 1e-12));
    CHECK_THAT(a.product, WithinAbs(0.390625, 1e-12));
    for (const auto &c : a.checks) {
        CHECK(c.pass);
    }
}

TEST_CASE("variance product decomposes into the quantum and disturbance parts") {
    const auto p1 = gaussian(grid, 0.9);
    const auto p2 = gaussian(grid, 0.35);
    for (double g : {-2.0, -1.0, -0.3, 0.0, 0.7, 2.0}) {
        const auto a = ak_analytic_variances({1.3, 0.8, g}, p1, p2);
        CHECK_THAT(a.product, WithinRel(a.mu_var * a.nu_var, 1e-12));
        CHECK_THAT(a.quantum + a.disturbance, WithinRel(a.product, 1e-12));
        CHECK(a.product >= 0.25 - 1e-12);
    }
}

TEST_CASE("gamma = -1 relation saturates for minimal probes") {
    const auto probe = gaussian(grid, 0.5);
    const auto a = ak_analytic_variances({1.0, 1.0, -1.0}, probe, probe);
    bool found = false;
    for (const auto &c : a.checks) {
        if (c.tag == "AK-SEQUENTIAL") {
            found = true;
            CHECK_THAT(c.lhs, WithinAbs(0.25, 1e-12));
        }
    }
    CHECK(found);
}

TEST_CASE("three-body simulation reproduces variance addition") {
    const auto psi = gaussian(grid, 0.8, 0.2);
    const auto probe = gaussian(grid, 0.5);
    for (double g : {-1.0, 0.0, 1.0}) {
        const auto s = ak_simulate(psi, probe, probe, {1.0, 1.0, g});
        CHECK(s.agrees);
        CHECK(s.rel_error_q < ak_simulation_tolerance);
        CHECK(s.rel_error_p < ak_simulation_tolerance);
    }
}

TEST_CASE("evolution is unitary and backend independent") {
    const auto psi = gaussian(grid, 0.7, 0.1, 0.3);
    const auto probe = gaussian(grid, 0.5);
    const auto a = ak_evolve(psi, probe, probe, {1.0, 1.0, 0.5}, kernels::Backend::serial);
    const auto b = ak_evolve(psi, probe, probe, {1.0, 1.0, 0.5}, kernels::Backend::openmp);
    CHECK(a.amplitudes == b.amplitudes);
    CHECK_THAT(a.norm(), WithinAbs(1.0, 1e-10));
}

TEST_CASE("parameter and cost errors") {
    const auto probe = gaussian(grid, 0.5);
    const auto off = gaussian(grid, 0.5, 0.0, 0.0, 1.0);
    CHECK(test::error_kind([&] { ak_evolve(probe, off, probe, {}); }) == ErrorKind::parameter);
    const auto big = GridSpec::centered(128, 20.0);
    const auto pb = gaussian(big, 0.5);
    CHECK(test::error_kind([&] { ak_evolve(pb, pb, pb, {}); }) == ErrorKind::cost);
    CHECK(test::error_kind([&] { ak_gamma_study({3.0}, {}, probe, probe, probe, false); }) == ErrorKind::parameter);
}
