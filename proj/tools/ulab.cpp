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

// Command-line front end: one subcommand per scenario kind plus `suite`.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "ulab/error.hpp"
#include "ulab/io.hpp"
#include "ulab/scenario.hpp"

namespace {

using json = nlohmann::ordered_json;

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> hbar;
    int jobs = 1;
    bool quiet = false;
};

void print_summary(const ulab::Report &r, const ulab::Scenario &s) {
    std::size_t failed = 0;
    for (const auto &c : r.checks) {
        failed += c.pass ? 0 : 1;
    }
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.scenario << " (" << ulab::to_string(r.command) << "): "
              << r.checks.size() - failed << "/" << r.checks.size() << " checks";
    if (!r.conjectures.empty()) {
        std::cout << ", " << r.conjectures.size() << " conjecture rows";
    }
    std::cout << " -> " << s.out_dir.string() << "\n";
    for (const auto &c : r.checks) {
        if (!c.pass) {
            std::cout << "  FAIL " << c.tag << " " << c.name << ": " << ulab::io::format_real(c.lhs)
                      << " >= " << ulab::io::format_real(c.rhs) << "\n";
        }
    }
    for (const auto &f : r.failures) {
        std::cout << "  FAIL " << f << "\n";
    }
    for (const auto &w : r.warnings) {
        std::cerr << "  warning: " << w << "\n";
    }
}

std::vector<json> load_documents(const std::string &path) {
    const auto text = ulab::io::read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        ulab::fail(ulab::ErrorKind::usage, path + ": " + e.what());
    }
    if (doc.is_array()) {
        return {doc.begin(), doc.end()};
    }
    return {doc};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"ulab: uncertainty relations on a phase-space grid"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--config", common.config, "scenario JSON (object, or array for a batch)");
    app.add_option("--out", common.out, "output root; each scenario writes to <out>/<name>");
    app.add_option("--seed", common.seed, "override the scenario seed");
    app.add_option("--hbar", common.hbar, "override hbar")->check(CLI::PositiveNumber);
    app.add_option("--jobs,-j", common.jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);
    app.add_flag("--quiet,-q", common.quiet, "only report failures through the exit status");

    json params = json::object();
    std::map<ulab::Command, CLI::App *> subs;
    for (auto c : ulab::all_commands()) {
        subs[c] = app.add_subcommand(std::string(ulab::to_string(c)));
    }
    auto *suite = app.add_subcommand("suite", "run every command with default settings");

    auto number = [&](CLI::App *sub, const std::string &flag, const std::string &key, const std::string &help) {
        sub->add_option_function<double>(flag, [&params, key](const double &v) { params[key] = v; }, help);
    };
    auto *seq = subs[ulab::Command::sequential];
    number(seq, "--probe-a", "probe_a", "probe Gaussian width parameter");
    number(seq, "--lambda", "lambda", "coupling strength");
    seq->add_option_function<std::vector<double>>(
           "--epsilons",
           [&params](const std::vector<double> &v) {
               params["eps1"] = v[0];
               params["eps2"] = v[1];
           },
           "eps1 eps2")
        ->expected(2);
    auto *ak = subs[ulab::Command::arthurs_kelly];
    number(ak, "--lambda", "lambda", "first coupling");
    number(ak, "--kappa", "kappa", "second coupling");
    number(ak, "--probe1-a", "probe1_a", "first probe width parameter");
    number(ak, "--probe2-a", "probe2_a", "second probe width parameter");
    ak->add_option_function<std::vector<double>>(
        "--gamma", [&params](const std::vector<double> &v) { params["gammas"] = v; }, "gamma values to sweep");
    ak->add_flag_callback("--analytic-only", [&params] { params["simulate"] = false; }, "skip the three-body simulation");
    ak->add_flag_callback("--simulate", [&params] { params["simulate"] = true; }, "run the three-body simulation");
    auto *lp = subs[ulab::Command::landau_pollak];
    lp->add_option_function<std::vector<double>>(
        "--areas", [&params](const std::vector<double> &v) { params["areas"] = v; }, "cell areas in units of 2 pi hbar");
    auto *wc = subs[ulab::Command::werner_constant];
    wc->add_option_function<int>("--basis-size", [&params](const int &v) { params["basis_size"] = v; }, "oscillator states");
    wc->add_option_function<int>("--budget", [&params](const int &v) { params["budget"] = v; }, "objective evaluations");
    wc->add_option_function<int>("--starts", [&params](const int &v) { params["starts"] = v; }, "multi-starts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        ulab::Overrides ov;
        ov.seed = common.seed;
        ov.hbar = common.hbar;
        if (!common.out.empty()) {
            ov.out_dir = common.out;
        }
        ov.params = params;

        std::vector<ulab::Scenario> scenarios;
        if (suite->parsed()) {
            scenarios = ulab::suite_scenarios(ov);
        } else {
            ulab::Command cmd{};
            for (const auto &[c, sub] : subs) {
                if (sub->parsed()) {
                    cmd = c;
                }
            }
            if (common.config.empty()) {
                scenarios.push_back(ulab::parse_scenario(ulab::default_document(cmd), ov));
            } else {
                const auto docs = load_documents(common.config);
                for (std::size_t i = 0; i < docs.size(); ++i) {
                    json d = docs[i];
                    if (!d.is_object()) {
                        ulab::fail(ulab::ErrorKind::usage, common.config + ": entry " + std::to_string(i) + " is not an object");
                    }
                    if (!d.contains("command")) {
                        d["command"] = std::string(ulab::to_string(cmd));
                    } else if (d.at("command") != std::string(ulab::to_string(cmd))) {
                        ulab::fail(ulab::ErrorKind::usage,
                                   common.config + ": entry " + std::to_string(i) + " is not a " +
                                       std::string(ulab::to_string(cmd)) + " scenario");
                    }
                    scenarios.push_back(ulab::parse_scenario(d, ov));
                }
            }
        }
        const auto reports = ulab::run_batch(scenarios, common.jobs);
        if (!common.quiet) {
            for (std::size_t i = 0; i < reports.size(); ++i) {
                print_summary(reports[i], scenarios[i]);
            }
        }
        return ulab::exit_status(reports);
    } catch (const ulab::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
