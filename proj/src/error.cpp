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

#include "ulab/error.hpp"

#include <utility>

namespace ulab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::representation: return "representation";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::grid_symmetry: return "grid-symmetry";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::degenerate_set: return "degenerate-set";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::range: return "range";
    case ErrorKind::commensurability: return "grid-commensurability";
    case ErrorKind::probe_validity: return "probe-validity";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::cost: return "cost";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::uncertainty_violation: return "uncertainty-violation";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

std::string_view to_string(WarningKind kind) {
    switch (kind) {
    case WarningKind::boundary_aliasing: return "boundary-aliasing";
    case WarningKind::untrusted_moment: return "untrusted-moment";
    case WarningKind::convergence: return "convergence";
    }
    return "unknown";
}

namespace {
thread_local std::vector<Warning> warning_log;
}

void warn(WarningKind kind, std::string message) {
    warning_log.push_back({kind, std::move(message)});
}

std::vector<Warning> take_warnings() {
    std::vector<Warning> out;
    out.swap(warning_log);
    return out;
}

void clear_warnings() { warning_log.clear(); }

} // namespace ulab
