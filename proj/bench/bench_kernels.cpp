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

// Serial vs OpenMP timings for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "ulab/covariant.hpp"
#include "ulab/kernels.hpp"
#include "ulab/states.hpp"

namespace {

using ulab::kernels::Backend;

Backend backend_of(const benchmark::State &st) { return st.range(1) ? Backend::openmp : Backend::serial; }

void BM_Spectrogram(benchmark::State &st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = ulab::GridSpec::centered(n, 40.0);
    const auto psi = ulab::gaussian(g, 0.8, 0.3, 0.5, -1.0);
    const auto w = ulab::gaussian(g, 0.5);
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(ulab::kernels::spectrogram(g, w.amplitudes(), psi.amplitudes(), rows, backend_of(st)));
    }
}

void BM_Convolve(benchmark::State &st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
    }
    for (auto _ : st) {
        benchmark::DoNotOptimize(ulab::kernels::convolve(a, b, 1.0, backend_of(st)));
    }
}

void BM_TransformAxis(benchmark::State &st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = ulab::GridSpec::centered(n, 20.0);
    std::vector<ulab::cplx> t(n * n * n, ulab::cplx(1.0, 0.0));
    for (auto _ : st) {
        ulab::kernels::transform_axis(t, {n, n, n}, 1, g, ulab::kernels::Direction::to_momentum, backend_of(st));
        benchmark::DoNotOptimize(t.data());
    }
}

void BM_WernerSearch(benchmark::State &st) {
    ulab::WernerSearchOptions o;
    o.budget = static_cast<int>(st.range(0));
    o.backend = backend_of(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(ulab::werner_constant_search(o).c_est);
    }
}

} // namespace

BENCHMARK(BM_Spectrogram)->ArgsProduct({{256, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convolve)->ArgsProduct({{1024, 8192}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TransformAxis)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WernerSearch)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
