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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ulab {

enum class ErrorKind {
    representation,
    parameter,
    aliasing,
    grid_symmetry,
    resolution,
    degenerate_set,
    numerical,
    range,
    commensurability,
    probe_validity,
    conditioning,
    cost,
    coverage,
    grid_mismatch,
    uncertainty_violation,
    usage,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what),
          kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string &what) {
    if (!cond) {
        fail(kind, what);
    }
}

enum class WarningKind { boundary_aliasing, untrusted_moment, convergence };

struct Warning {
    WarningKind kind;
    std::string message;
};

std::string_view to_string(WarningKind kind);

// Warnings are collected per thread; operations stay pure with respect to
// their return values and callers drain the log when they care.
void warn(WarningKind kind, std::string message);
std::vector<Warning> take_warnings();
void clear_warnings();

} // namespace ulab
