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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ulab/grid.hpp"
#include "ulab/report.hpp"

namespace ulab {

enum class Command {
    prep_ur,
    overall_width,
    landau_pollak,
    periodic,
    covariant,
    husimi,
    werner_constant,
    sequential,
    arthurs_kelly,
    suite,
};

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view s);
const std::vector<Command> &all_commands();

/// A validated scenario. `state` and `params` hold the schema-checked JSON
/// with every default filled in.
struct Scenario {
    std::string name;
    Command command = Command::prep_ur;
    GridSpec grid;
    std::uint64_t seed = 1;
    nlohmann::ordered_json state;
    nlohmann::ordered_json params;
    std::filesystem::path out_dir;
    bool plots = true;
};

/// Values from the command line; they override the scenario document.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> hbar;
    std::optional<std::filesystem::path> out_dir;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

/// Default document for a command (grid, state and parameters).
nlohmann::ordered_json default_document(Command c);

/// Checks `doc` against the schema and fills defaults. Any violation raises a
/// usage error whose message starts with the JSON pointer of the offending
/// field.
Scenario parse_scenario(const nlohmann::ordered_json &doc, const Overrides &ov = {});

/// A named table; cells are already formatted. `block` > 0 inserts a blank
/// line every `block` rows in plot files (2-D grids).
struct Series {
    std::string name;
    std::string relation;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool plot = false;
    std::size_t block = 0;
};

struct Report {
    std::string scenario;
    Command command = Command::prep_ur;
    nlohmann::ordered_json provenance;
    std::vector<std::pair<std::string, double>> quantities;
    std::vector<BoundCheck> checks;
    std::vector<BoundCheck> conjectures;
    std::vector<Series> series;
    std::vector<std::string> warnings;
    /// Failed consistency requirements that are not inequality checks.
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const Series *find_series(std::string_view name) const;
};

Report run_scenario(const Scenario &s);

/// report.json, quantities.csv, checks.csv, one CSV per series, and plot
/// files for plot series.
void write_report(const Report &r, const std::filesystem::path &dir);

/// Whitespace-separated data file for one series with a comment header naming
/// the relation. Missing series is a usage error.
std::filesystem::path emit_plotdata(const Report &r, std::string_view series, const std::filesystem::path &dir);

/// Runs scenarios on up to `jobs` threads, each writing under its own
/// directory. Returns the reports in input order.
std::vector<Report> run_batch(const std::vector<Scenario> &scenarios, int jobs);

/// The default scenario of every command except suite, writing under `out`.
std::vector<Scenario> suite_scenarios(const Overrides &ov);

/// 0 when every report passes, 2 otherwise.
int exit_status(const std::vector<Report> &reports);

} // namespace ulab
