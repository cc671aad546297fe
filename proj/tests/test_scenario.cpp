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

#include <filesystem>
#include <string>

#include "support.hpp"
#include "ulab/io.hpp"
#include "ulab/scenario.hpp"
#include "ulab/states.hpp"

using namespace ulab;
using json = nlohmann::ordered_json;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("ulab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string usage_message(const json &doc) {
    try {
        parse_scenario(doc);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::usage);
        return e.what();
    }
    return "";
}

double quantity(const Report &r, const std::string &k) {
    for (const auto &[name, v] : r.quantities) {
        if (name == k) {
            return v;
        }
    }
    FAIL("missing quantity " << k);
    return 0.0;
}

} // namespace

TEST_CASE("CSV quoting and number formatting") {
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
    CHECK(io::format_real(0.0) == "0");
    CHECK(io::format_real(-0.0) == "0");
    CHECK(io::format_real(0.1) == "0.1");
    io::Table t{{"x", "note"}, {}};
    t.add({"1", "a,b"});
    CHECK(t.to_csv() == "x,note\n1,\"a,b\"\n");
}

TEST_CASE("wavefunction files round-trip") {
    const auto dir = scratch("wf");
    const auto g = GridSpec::centered(64, 12.0, 0.7);
    const auto psi = gaussian(g, 0.6, 0.2, 0.3);
    io::write_wavefunction(dir / "psi.csv", psi);
    const auto back = io::read_wavefunction(dir / "psi.csv");
    CHECK(back.grid().same_as(g));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        CHECK(std::abs(back.amplitudes()[j] - psi.amplitudes()[j]) < 1e-11);
    }
    fs::remove_all(dir);
}

TEST_CASE("schema errors name the offending field") {
    CHECK_THAT(usage_message({{"command", "prep-ur"}, {"bogus", 1}}), ContainsSubstring("/bogus: unknown key"));
    CHECK_THAT(usage_message({{"command", "nope"}}), ContainsSubstring("/command"));
    CHECK_THAT(usage_message({{"name", "x"}}), ContainsSubstring("/command"));
    CHECK_THAT(usage_message({{"command", "covariant"}, {"params", {{"eps1", 0.7}}}}),
               ContainsSubstring("/params/eps1"));
    CHECK_THAT(usage_message({{"command", "covariant"}, {"params", {{"T", {{"kind", "gaussian"}, {"x", 1}}}}}}),
               ContainsSubstring("/params/T/x: unknown key"));
    CHECK_THAT(usage_message({{"command", "prep-ur"}, {"state", {{"kind", "file"}, {"path", "/no/such/file.csv"}}}}),
               ContainsSubstring("/state/path"));
    CHECK_THAT(usage_message({{"command", "prep-ur"}, {"grid", {{"n_points", 64}}}}), ContainsSubstring("/grid"));
    CHECK_THAT(usage_message({{"command", "arthurs-kelly"}, {"params", {{"gammas", {1, "a"}}}}}),
               ContainsSubstring("/params/gammas/1"));
}

TEST_CASE("overrides take precedence over the document") {
    Overrides ov;
    ov.seed = 42;
    ov.hbar = 0.5;
    ov.out_dir = "/tmp/x";
    ov.params = {{"eps1", 0.1}};
    const auto s = parse_scenario({{"command", "overall-width"}, {"seed", 3}, {"hbar", 2.0}}, ov);
    CHECK(s.seed == 42);
    CHECK(s.grid.hbar == 0.5);
    CHECK(s.out_dir == fs::path("/tmp/x/overall-width"));
    CHECK(s.params.at("eps1").get<double>() == 0.1);
}

TEST_CASE("prep-ur scenario on the minimal Gaussian") {
    const auto r = run_scenario(parse_scenario({{"command", "prep-ur"}, {"state", {{"kind", "gaussian"}, {"a", 0.5}}}}));
    CHECK_THAT(quantity(r, "product"), WithinAbs(0.5, 1e-9));
    CHECK_THAT(quantity(r, "bound"), WithinAbs(0.5, 1e-12));
    CHECK(r.passed());
}

TEST_CASE("landau-pollak sweep has a monotone a0 column") {
    const auto r = run_scenario(parse_scenario({{"command", "landau-pollak"}, {"params", {{"min_area", false}}}}));
    const auto *s = r.find_series("a0_vs_area");
    REQUIRE(s != nullptr);
    double prev = -1.0;
    for (const auto &row : s->rows) {
        const double a0 = std::stod(row[1]);
        CHECK(a0 >= prev);
        prev = a0;
    }
}

TEST_CASE("every emitted check carries a documented tag") {
    for (Command c : {Command::covariant, Command::sequential, Command::arthurs_kelly, Command::periodic}) {
        const auto r = run_scenario(parse_scenario(default_document(c)));
        for (const auto &k : r.checks) {
            CHECK(is_known_tag(k.tag));
        }
        for (const auto &k : r.conjectures) {
            CHECK(is_known_tag(k.tag));
        }
    }
}

TEST_CASE("plot data files and missing series") {
    const auto dir = scratch("plot");
    const auto r = run_scenario(parse_scenario({{"command", "husimi"}, {"params", {{"stride", 16}}}}));
    const auto path = emit_plotdata(r, "husimi", dir);
    const auto text = io::read_file(path);
    CHECK(text.rfind("# husimi", 0) == 0);
    CHECK_THAT(text, ContainsSubstring("\n\n"));
    CHECK(test::error_kind([&] { emit_plotdata(r, "nope", dir); }) == ErrorKind::usage);
    fs::remove_all(dir);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
    const auto dir = scratch("det");
    Overrides ov;
    ov.seed = 5;
    std::vector<Scenario> ss;
    for (auto c : {Command::overall_width, Command::covariant, Command::sequential}) {
        ov.out_dir = dir / "a";
        ss.push_back(parse_scenario(default_document(c), ov));
    }
    run_batch(ss, 3);
    for (auto &s : ss) {
        s.out_dir = dir / "b" / s.name;
    }
    run_batch(ss, 1);
    for (const auto &s : ss) {
        for (const auto &f : fs::directory_iterator(dir / "a" / s.name)) {
            CHECK(io::read_file(f.path()) == io::read_file(dir / "b" / s.name / f.path().filename()));
        }
    }
    CHECK(exit_status(run_batch(ss, 2)) == 0);
    fs::remove_all(dir);
}

TEST_CASE("exit status separates bound failures") {
    Report ok;
    ok.checks.push_back(make_check("holds", "UR-PREP-SD", 1.0, 0.5));
    Report bad = ok;
    bad.checks.push_back(make_check("violated", "UR-PREP-SD", 0.4, 0.5));
    CHECK(exit_status({ok, ok}) == 0);
    CHECK(exit_status({ok, bad}) == 2);
    Report broken = ok;
    broken.failures.push_back("simulation mismatch");
    CHECK(exit_status({broken}) == 2);
}
