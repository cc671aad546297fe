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

#include <numeric>
#include <random>

#include "ulab/grid.hpp"
#include "ulab/kernels.hpp"
#include "ulab/states.hpp"

using namespace ulab;
using kernels::Backend;

TEST_CASE("convolve: brute force oracle, both backends bit-identical") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(37), b(53);
    for (auto &v : a) v = u(rng);
    for (auto &v : b) v = u(rng);
    const auto s = kernels::convolve(a, b, 0.5, Backend::serial);
    const auto p = kernels::convolve(a, b, 0.5, Backend::openmp);
    REQUIRE(s.size() == a.size() + b.size() - 1);
    CHECK(s == p);
    for (std::size_t k = 0; k < s.size(); ++k) {
        double ref = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (k >= i && k - i < b.size()) {
                ref += a[i] * b[k - i];
            }
        }
        CHECK(std::abs(s[k] - 0.5 * ref) < 1e-13);
    }
}

TEST_CASE("spectrogram: direct evaluation oracle and backend equality") {
    const auto g = GridSpec::centered(64, 16.0);
    const auto psi = gaussian(g, 0.7, 0.2, 0.5, 0.4);
    const auto w = gaussian(g, 1.1, -0.3);
    std::vector<std::size_t> rows{0, 5, 31, 32, 63};
    const auto s = kernels::spectrogram(g, w.amplitudes(), psi.amplitudes(), rows, Backend::serial);
    const auto p = kernels::spectrogram(g, w.amplitudes(), psi.amplitudes(), rows, Backend::openmp);
    CHECK(s == p);
    const std::size_t n = g.n_points;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        // window shifted cyclically so that its origin sits at x_{rows[r]}
        std::vector<cplx> prod(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t m = (j + n + n / 2 - rows[r]) % n;
            prod[j] = w.amplitudes()[m] * psi.amplitudes()[j];
        }
        std::vector<cplx> out(n);
        forward_transform(g, prod, out);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(s[r * n + k] - std::norm(out[k])) < 1e-12);
        }
    }
}

TEST_CASE("transform_axis: agrees with per-line transforms, backends bit-identical") {
    const std::size_t n = 16;
    const auto g = GridSpec::centered(n, 8.0);
    std::vector<cplx> t(n * n * n);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> N;
    for (auto &v : t) v = cplx(N(rng), N(rng));
    for (std::size_t axis = 0; axis < 3; ++axis) {
        auto s = t, p = t;
        kernels::transform_axis(s, {n, n, n}, axis, g, kernels::Direction::to_momentum, Backend::serial);
        kernels::transform_axis(p, {n, n, n}, axis, g, kernels::Direction::to_momentum, Backend::openmp);
        CHECK(s == p);
        const std::size_t stride = axis == 0 ? n * n : axis == 1 ? n : 1;
        // one line through (i, j) in the remaining axes
        const std::size_t base = axis == 0 ? 3 * n + 5 : axis == 1 ? 3 * n * n + 5 : 3 * n * n + 5 * n;
        std::vector<cplx> line(n), ref(n);
        for (std::size_t k = 0; k < n; ++k) line[k] = t[base + k * stride];
        forward_transform(g, line, ref);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(s[base + k * stride] - ref[k]) < 1e-12);
        }
        kernels::transform_axis(s, {n, n, n}, axis, g, kernels::Direction::to_position, Backend::serial);
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(std::abs(s[k] - t[k]) < 1e-12);
        }
    }
}
