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

#include "ulab/report.hpp"

#include <algorithm>
#include <cmath>

namespace ulab {

BoundCheck make_check(std::string name, std::string tag, double lhs, double rhs, double tol) {
    BoundCheck c;
    c.name = std::move(name);
    c.tag = std::move(tag);
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = lhs - rhs;
    c.pass = std::isfinite(lhs) && c.margin >= -tol * std::max(1.0, std::abs(rhs));
    return c;
}

const std::vector<RelationTag> &relation_index() {
    static const std::vector<RelationTag> index = {
        {"UR-PREP-SD", "Delta(Q,psi) Delta(P,psi) >= hbar/2"},
        {"UR-PREP-WIDTH", "W_e1(Q,psi) W_e2(P,psi) >= 2 pi hbar (1-e1-e2)^2"},
        {"UR-PREP-WIDTH-UFFINK",
         "W_e1(Q,psi) W_e2(P,psi) >= 2 pi hbar (sqrt((1-e1)(1-e2)) - sqrt(e1 e2))^2"},
        {"LP-SUM", "prob^Q(X) + prob^P(Y) <= 1 + sqrt(a0) < 2"},
        {"LP-TRACE", "tr Q(X)P(Y)Q(X) = |X||Y| / (2 pi hbar)"},
        {"LP-AREA", "|X||Y| >= 2 pi hbar (1-e1-e2)^2 when both localizations hold"},
        {"PERIODIC-COMMUTE", "periodic Q^g, P^h commute iff 2 pi hbar/(ab) is a positive integer"},
        {"UR-NOISE", "Var(mu_T) Var(nu_T) >= hbar^2/4"},
        {"UR-COV-STATE", "Delta(G1,psi) Delta(G2,psi) >= hbar"},
        {"UR-RESOLUTION", "W_e1(mu_T) W_e2(nu_T) >= 2 pi hbar (1-e1-e2)^2"},
        {"UR-STD-ERROR", "eps(M1,Q) eps(M2,P) >= hbar/2"},
        {"UR-DISTANCE", "d(M1,Q) d(M2,P) >= C hbar, C = 0.3047"},
        {"UR-ERROR-BAR", "W_e1,d(M1,Q) W_e2,d(M2,P) >= 2 pi hbar (1-e1-e2)^2"},
        {"UR-ERROR-BAR-LOWER", "W_e1(Q,T) W_e2(P,T) >= 2 pi hbar (1-e1-e2)^2"},
        {"AK-QUANTUM", "probe-internal term Q >= hbar^2/8"},
        {"AK-DISTURBANCE", "mutual-disturbance term D >= (hbar^2/16)(x + 1/x) >= hbar^2/8"},
        {"AK-NOISE", "Var(mu_gamma) Var(nu_gamma) >= hbar^2/4"},
        {"AK-SEQUENTIAL", "[Var(P2)/kappa^2][kappa^2 Var(Q2)] >= hbar^2/4 at gamma = -1"},
        {"CONJ-NOISE-HALF", "logged only: N_i(M1) N_i(M2) >= hbar/2"},
        {"CONJ-NOISE-QUARTER", "logged only: N_i(M1) N_i(M2) >= hbar^2/4"},
        {"CONJ-RESOLUTION", "logged only: gamma_e1(M1) gamma_e2(M2) >= 2 pi hbar (1-e1-e2)^2"},
    };
    return index;
}

bool is_known_tag(std::string_view tag) {
    const auto &idx = relation_index();
    return std::any_of(idx.begin(), idx.end(), [&](const RelationTag &t) { return t.tag == tag; });
}

} // namespace ulab
