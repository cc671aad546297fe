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

#include <string>
#include <string_view>
#include <vector>

namespace ulab {

/// One inequality lhs >= rhs evaluated on concrete numbers. `tag` names the
/// relation in the README's relation index.
struct BoundCheck {
    std::string name;
    std::string tag;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

/// Passes when lhs - rhs >= -tol * max(1, |rhs|).
BoundCheck make_check(std::string name, std::string tag, double lhs, double rhs, double tol = 1e-9);

/// Relation tags and their one-line descriptions, in documentation order.
struct RelationTag {
    std::string_view tag;
    std::string_view relation;
};
const std::vector<RelationTag> &relation_index();
bool is_known_tag(std::string_view tag);

} // namespace ulab
