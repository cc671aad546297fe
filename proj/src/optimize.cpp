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

#include "ulab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ulab {

NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0, const NelderMeadOptions &opts,
                             const std::function<void(int, double)> &on_eval) {
    const std::size_t d = x0.size();
    NelderMeadResult res;
    int evals = 0;
    auto eval = [&](const std::vector<double> &x) {
        const double v = f(x);
        ++evals;
        if (on_eval) {
            on_eval(evals, v);
        }
        return v;
    };
    if (d == 0) {
        res.x = x0;
        res.value = eval(x0);
        res.evaluations = evals;
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> simplex(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) {
        simplex[i + 1][i] += opts.initial_step;
    }
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        fv[i] = eval(simplex[i]);
    }
    std::vector<std::size_t> order(d + 1);
    auto point = [&](const std::vector<double> &c, const std::vector<double> &w, double t) {
        std::vector<double> p(d);
        for (std::size_t k = 0; k < d; ++k) {
            p[k] = c[k] + t * (w[k] - c[k]);
        }
        return p;
    };

    while (evals < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[d - 1];
        if (std::abs(fv[worst] - fv[best]) <= opts.f_tolerance * (std::abs(fv[best]) + 1e-300)) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) {
                centroid[k] += simplex[i][k] / static_cast<double>(d);
            }
        }
        const auto xr = point(centroid, simplex[worst], -1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const auto xe = point(centroid, simplex[worst], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto xc = outside ? point(centroid, xr, 0.5) : point(centroid, simplex[worst], 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) {
                        continue;
                    }
                    simplex[i] = point(simplex[best], simplex[i], 0.5);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.value = *it;
    res.evaluations = evals;
    return res;
}

} // namespace ulab
