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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ulab/grid.hpp"
#include "ulab/stats.hpp"

namespace ulab::io {

/// Fixed "%.12g" rendering used by every text output.
std::string format_real(double v);

/// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with inner quotes doubled.
std::string csv_field(std::string_view s);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    [[nodiscard]] std::string to_csv() const;
};

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

// WaveFunction files: a first line "# {json}" carrying the grid and the
// representation, then the header x,re,im (or p,re,im) and one row per sample.
std::string wavefunction_csv(const WaveFunction &psi);
WaveFunction parse_wavefunction_csv(std::string_view text);
void write_wavefunction(const std::filesystem::path &path, const WaveFunction &psi);
WaveFunction read_wavefunction(const std::filesystem::path &path);

std::string density_csv(const ProbabilityDensity &d);

} // namespace ulab::io
