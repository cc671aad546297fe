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

#include "ulab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "ulab/arthurs_kelly.hpp"
#include "ulab/concentration.hpp"
#include "ulab/covariant.hpp"
#include "ulab/error.hpp"
#include "ulab/io.hpp"
#include "ulab/sequential.hpp"
#include "ulab/states.hpp"
#include "ulab/stats.hpp"

namespace ulab {

using json = nlohmann::ordered_json;

namespace {

constexpr std::pair<Command, std::string_view> command_names[] = {
    {Command::prep_ur, "prep-ur"},
    {Command::overall_width, "overall-width"},
    {Command::landau_pollak, "landau-pollak"},
    {Command::periodic, "periodic"},
    {Command::covariant, "covariant"},
    {Command::husimi, "husimi"},
    {Command::werner_constant, "werner-constant"},
    {Command::sequential, "sequential"},
    {Command::arthurs_kelly, "arthurs-kelly"},
    {Command::suite, "suite"},
};

} // namespace

std::string_view to_string(Command c) {
    for (const auto &[k, s] : command_names) {
        if (k == c) {
            return s;
        }
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view s) {
    for (const auto &[k, name] : command_names) {
        if (name == s) {
            return k;
        }
    }
    return std::nullopt;
}

const std::vector<Command> &all_commands() {
    static const std::vector<Command> v = {Command::prep_ur,     Command::overall_width,   Command::landau_pollak,
                                           Command::periodic,    Command::covariant,       Command::husimi,
                                           Command::werner_constant, Command::sequential, Command::arthurs_kelly};
    return v;
}

// ---------------------------------------------------------------------------
// schema

namespace {

enum class Kind { number, integer, boolean, numbers, string, state };

struct Field {
    const char *key;
    Kind kind;
    json def; // null: required
};

[[noreturn]] void schema_error(const std::string &ptr, const std::string &msg) {
    fail(ErrorKind::usage, (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

json check_state(const json &in, const std::string &ptr);

json check_value(const json &v, Kind kind, const std::string &ptr) {
    switch (kind) {
    case Kind::number:
        if (!v.is_number()) {
            schema_error(ptr, "expected a number");
        }
        return v;
    case Kind::integer:
        if (!v.is_number_integer()) {
            schema_error(ptr, "expected an integer");
        }
        return v;
    case Kind::boolean:
        if (!v.is_boolean()) {
            schema_error(ptr, "expected true or false");
        }
        return v;
    case Kind::numbers:
        if (!v.is_array() || v.empty()) {
            schema_error(ptr, "expected a non-empty array of numbers");
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                schema_error(ptr + "/" + std::to_string(i), "expected a number");
            }
        }
        return v;
    case Kind::string:
        if (!v.is_string()) {
            schema_error(ptr, "expected a string");
        }
        return v;
    case Kind::state:
        return check_state(v, ptr);
    }
    return v;
}

json check_object(const json &in, const std::string &ptr, const std::vector<Field> &fields) {
    if (!in.is_object()) {
        schema_error(ptr, "expected an object");
    }
    for (const auto &[k, v] : in.items()) {
        const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field &f) { return k == f.key; });
        if (!known) {
            schema_error(ptr + "/" + k, "unknown key");
        }
    }
    json out = json::object();
    for (const auto &f : fields) {
        const std::string fp = ptr + "/" + f.key;
        if (in.contains(f.key)) {
            out[f.key] = check_value(in.at(f.key), f.kind, fp);
        } else if (!f.def.is_null()) {
            out[f.key] = f.kind == Kind::state ? check_state(f.def, fp) : f.def;
        } else {
            schema_error(fp, "required");
        }
    }
    return out;
}

json check_state(const json &in, const std::string &ptr) {
    if (!in.is_object()) {
        schema_error(ptr, "expected an object");
    }
    if (!in.contains("kind") || !in.at("kind").is_string()) {
        schema_error(ptr + "/kind", "required string (gaussian, box, random, target, file)");
    }
    const auto kind = in.at("kind").get<std::string>();
    std::vector<Field> f{{"kind", Kind::string, kind}};
    if (kind == "gaussian") {
        f.insert(f.end(), {{"a", Kind::number, 0.5}, {"b", Kind::number, 0.0}, {"boost", Kind::number, 0.0},
                           {"shift", Kind::number, 0.0}});
    } else if (kind == "box") {
        f.insert(f.end(), {{"center", Kind::number, 0.0}, {"width", Kind::number, 1.0}});
    } else if (kind == "random") {
        f.push_back({"terms", Kind::integer, 5});
    } else if (kind == "target") {
        f.insert(f.end(), {{"delta_q", Kind::number, nullptr}, {"delta_p", Kind::number, nullptr}});
    } else if (kind == "file") {
        f.push_back({"path", Kind::string, nullptr});
    } else {
        schema_error(ptr + "/kind", "unknown state kind '" + kind + "'");
    }
    auto out = check_object(in, ptr, f);
    if (kind == "file" && !std::filesystem::exists(out.at("path").get<std::string>())) {
        schema_error(ptr + "/path", "file does not exist");
    }
    if (kind == "gaussian" && out.at("a").get<double>() <= 0.0) {
        schema_error(ptr + "/a", "must be positive");
    }
    return out;
}

json gaussian_spec(double a) { return json{{"kind", "gaussian"}, {"a", a}}; }

std::vector<Field> param_fields(Command c) {
    switch (c) {
    case Command::prep_ur:
        return {};
    case Command::overall_width:
        return {{"eps1", Kind::number, 0.05}, {"eps2", Kind::number, 0.05}, {"random_states", Kind::integer, 0}};
    case Command::landau_pollak:
        return {{"eps1", Kind::number, 0.01},
                {"eps2", Kind::number, 0.01},
                {"areas", Kind::numbers, json::array({0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.25, 8.0, 10.0})},
                {"min_area", Kind::boolean, true}};
    case Command::periodic:
        return {{"a", Kind::number, 1.0}, {"b_units", Kind::numbers, json::array({1.0, 0.5, 1.3})}};
    case Command::covariant:
        return {{"T", Kind::state, gaussian_spec(0.5)},   {"eps1", Kind::number, 0.05},
                {"eps2", Kind::number, 0.05},             {"delta_cells", Kind::number, 8.0},
                {"random_T", Kind::integer, 0},           {"warp", Kind::number, 0.3}};
    case Command::husimi:
        return {{"T", Kind::state, gaussian_spec(0.5)}, {"stride", Kind::integer, 4}};
    case Command::werner_constant:
        return {{"basis_size", Kind::integer, 8}, {"budget", Kind::integer, 5000}, {"starts", Kind::integer, 4}};
    case Command::sequential:
        return {{"probe_a", Kind::number, 0.5},   {"lambda", Kind::number, 1.0},   {"eps1", Kind::number, 0.05},
                {"eps2", Kind::number, 0.05},     {"delta_cells", Kind::number, 8.0}};
    case Command::arthurs_kelly:
        return {{"lambda", Kind::number, 1.0},
                {"kappa", Kind::number, 1.0},
                {"gammas", Kind::numbers, json::array({-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})},
                {"probe1_a", Kind::number, 0.5},
                {"probe2_a", Kind::number, 0.5},
                {"simulate", Kind::boolean, true}};
    case Command::suite:
        return {};
    }
    return {};
}

GridSpec parse_grid(const json &in, double hbar) {
    const std::string ptr = "/grid";
    if (!in.is_object()) {
        schema_error(ptr, "expected an object");
    }
    for (const auto &[k, v] : in.items()) {
        if (k != "n_points" && k != "length" && k != "x_min" && k != "dx") {
            schema_error(ptr + "/" + k, "unknown key");
        }
    }
    if (!in.contains("n_points") || !in.at("n_points").is_number_integer() || in.at("n_points").get<long long>() < 16) {
        schema_error(ptr + "/n_points", "required integer >= 16");
    }
    const auto n = in.at("n_points").get<std::size_t>();
    if (in.contains("length")) {
        if (in.contains("x_min") || in.contains("dx")) {
            schema_error(ptr + "/length", "give either length or x_min and dx");
        }
        if (!in.at("length").is_number() || in.at("length").get<double>() <= 0.0) {
            schema_error(ptr + "/length", "expected a positive number");
        }
        return GridSpec::centered(n, in.at("length").get<double>(), hbar);
    }
    for (const char *k : {"x_min", "dx"}) {
        if (!in.contains(k) || !in.at(k).is_number()) {
            schema_error(ptr + "/" + k, "required number (or give length)");
        }
    }
    GridSpec g{n, in.at("x_min").get<double>(), in.at("dx").get<double>(), hbar};
    if (g.dx <= 0.0) {
        schema_error(ptr + "/dx", "must be positive");
    }
    return g;
}

json default_grid(Command c) {
    switch (c) {
    case Command::periodic:
        return json{{"n_points", 520}, {"length", 20.0}};
    case Command::arthurs_kelly:
        return json{{"n_points", 64}, {"length", 20.0}};
    case Command::werner_constant:
        return json{{"n_points", 1024}, {"length", 48.0}};
    default:
        return json{{"n_points", 512}, {"length", 40.0}};
    }
}

} // namespace

json default_document(Command c) {
    json d;
    d["name"] = std::string(to_string(c));
    d["command"] = std::string(to_string(c));
    d["grid"] = default_grid(c);
    d["hbar"] = 1.0;
    d["seed"] = 1;
    d["state"] = gaussian_spec(0.5);
    d["params"] = json::object();
    if (c == Command::overall_width) {
        d["params"]["random_states"] = 20;
    }
    if (c == Command::covariant) {
        d["params"]["random_T"] = 3;
    }
    if (c == Command::sequential || c == Command::husimi) {
        d["state"] = json{{"kind", "gaussian"}, {"a", 0.8}, {"b", 0.3}, {"boost", 0.5}, {"shift", -1.0}};
    }
    return d;
}

Scenario parse_scenario(const json &doc_in, const Overrides &ov) {
    if (!doc_in.is_object()) {
        schema_error("", "scenario must be a JSON object");
    }
    static const char *top[] = {"name", "command", "grid", "hbar", "seed", "state", "params", "outputs"};
    for (const auto &[k, v] : doc_in.items()) {
        if (std::find_if(std::begin(top), std::end(top), [&](const char *t) { return k == t; }) == std::end(top)) {
            schema_error("/" + k, "unknown key");
        }
    }
    if (!doc_in.contains("command") || !doc_in.at("command").is_string()) {
        schema_error("/command", "required string");
    }
    const auto cmd = parse_command(doc_in.at("command").get<std::string>());
    if (!cmd || *cmd == Command::suite) {
        schema_error("/command", "unknown command '" + doc_in.at("command").get<std::string>() + "'");
    }
    const json defaults = default_document(*cmd);
    json doc = doc_in;
    Scenario s;
    s.command = *cmd;
    s.name = doc.value("name", defaults.at("name").get<std::string>());
    if (doc.contains("name") && !doc.at("name").is_string()) {
        schema_error("/name", "expected a string");
    }
    double hbar = 1.0;
    if (doc.contains("hbar")) {
        if (!doc.at("hbar").is_number() || doc.at("hbar").get<double>() <= 0.0) {
            schema_error("/hbar", "expected a positive number");
        }
        hbar = doc.at("hbar").get<double>();
    }
    if (ov.hbar) {
        hbar = *ov.hbar;
        require(hbar > 0.0, ErrorKind::usage, "--hbar must be positive");
    }
    s.grid = parse_grid(doc.contains("grid") ? doc.at("grid") : defaults.at("grid"), hbar);
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() || doc.at("seed").get<long long>() < 0) {
            schema_error("/seed", "expected a nonnegative integer");
        }
        s.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (ov.seed) {
        s.seed = *ov.seed;
    }
    s.state = check_state(doc.contains("state") ? doc.at("state") : defaults.at("state"), "/state");
    json params = doc.contains("params") ? doc.at("params") : defaults.at("params");
    if (!params.is_object()) {
        schema_error("/params", "expected an object");
    }
    for (const auto &[k, v] : ov.params.items()) {
        params[k] = v;
    }
    s.params = check_object(params, "/params", param_fields(s.command));
    for (const char *k : {"eps1", "eps2"}) {
        if (s.params.contains(k)) {
            const double e = s.params.at(k).get<double>();
            if (!(e > 0.0 && e < 0.5)) {
                schema_error(std::string("/params/") + k, "epsilon must lie in (0, 0.5)");
            }
        }
    }
    const json outputs = check_object(doc.contains("outputs") ? doc.at("outputs") : json::object(), "/outputs",
                                      {{"dir", Kind::string, "out/" + s.name}, {"plots", Kind::boolean, true}});
    s.out_dir = outputs.at("dir").get<std::string>();
    if (ov.out_dir) {
        s.out_dir = *ov.out_dir / s.name;
    }
    s.plots = outputs.at("plots").get<bool>();
    try {
        s.grid.validate();
    } catch (const Error &e) {
        schema_error("/grid", e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// report plumbing

bool Report::passed() const {
    return failures.empty() && std::all_of(checks.begin(), checks.end(), [](const BoundCheck &c) { return c.pass; });
}

const Series *Report::find_series(std::string_view name) const {
    for (const auto &s : series) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

namespace {

using io::format_real;

std::string relation_text(std::string_view tag) {
    for (const auto &t : relation_index()) {
        if (t.tag == tag) {
            return std::string(t.tag) + ": " + std::string(t.relation);
        }
    }
    return std::string(tag);
}

std::vector<std::string> cells(std::initializer_list<double> v) {
    std::vector<std::string> out;
    for (double x : v) {
        out.push_back(format_real(x));
    }
    return out;
}

void quantity(Report &r, std::string key, double v) { r.quantities.emplace_back(std::move(key), v); }

void add_checks(Report &r, const std::vector<BoundCheck> &cs) { r.checks.insert(r.checks.end(), cs.begin(), cs.end()); }

Series density_series(std::string name, std::string relation, const ProbabilityDensity &d) {
    Series s{std::move(name), std::move(relation), {"coordinate", "density"}, {}, true, 0};
    for (std::size_t i = 0; i < d.size(); ++i) {
        s.rows.push_back(cells({d.coord(i), d.weights[i]}));
    }
    return s;
}

WaveFunction make_state(const json &spec, const GridSpec &grid, std::uint64_t seed) {
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "gaussian") {
        return gaussian(grid, spec.at("a").get<double>(), spec.at("b").get<double>(), spec.at("boost").get<double>(),
                        spec.at("shift").get<double>());
    }
    if (kind == "box") {
        return box(grid, spec.at("center").get<double>(), spec.at("width").get<double>());
    }
    if (kind == "random") {
        std::mt19937_64 rng(seed);
        return random_superposition(grid, rng, spec.at("terms").get<int>());
    }
    if (kind == "target") {
        return target_spreads(grid, spec.at("delta_q").get<double>(), spec.at("delta_p").get<double>());
    }
    auto psi = io::read_wavefunction(spec.at("path").get<std::string>());
    require(psi.grid().same_as(grid), ErrorKind::usage, "state file grid differs from the scenario grid");
    return psi;
}

double num(const json &p, const char *k) { return p.at(k).get<double>(); }

// Value of density d at coordinate x (zero off its grid).
double sample_at(const ProbabilityDensity &d, double x) {
    const double f = (x - d.start) / d.spacing;
    const auto i = static_cast<long long>(std::llround(f));
    if (i < 0 || i >= static_cast<long long>(d.size())) {
        return 0.0;
    }
    return d.weights[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------
// commands

void run_prep_ur(const Scenario &s, Report &r) {
    const auto psi = make_state(s.state, s.grid, s.seed);
    const auto pr = check_preparation_ur(psi);
    quantity(r, "delta_q", pr.delta_q);
    quantity(r, "delta_p", pr.delta_p);
    quantity(r, "product", pr.product);
    quantity(r, "bound", pr.bound);
    quantity(r, "implied_delta_p_bound", pr.implied_delta_p_bound);
    r.checks.push_back(make_check("standard deviation product", "UR-PREP-SD", pr.product, pr.bound));
    r.series.push_back(density_series("position_density", relation_text("UR-PREP-SD"), position_density(psi)));
    r.series.push_back(density_series("momentum_density", relation_text("UR-PREP-SD"), momentum_density(psi)));
}

void run_overall_width(const Scenario &s, Report &r) {
    const double e1 = num(s.params, "eps1");
    const double e2 = num(s.params, "eps2");
    std::vector<WaveFunction> states{make_state(s.state, s.grid, s.seed)};
    std::mt19937_64 rng(s.seed);
    const int extra = s.params.at("random_states").get<int>();
    for (int k = 0; k < extra; ++k) {
        states.push_back(random_superposition(s.grid, rng));
    }
    Series t{"widths", relation_text("UR-PREP-WIDTH"),
             {"state", "width_q", "width_p", "product", "bound", "uffink_bound", "pass"}, {}, true, 0};
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto w = check_overall_width_ur(states[k], e1, e2);
        const auto c1 = make_check("width product, state " + std::to_string(k), "UR-PREP-WIDTH", w.product, w.bound);
        const auto c2 =
            make_check("width product (sharper), state " + std::to_string(k), "UR-PREP-WIDTH-UFFINK", w.product, w.uffink);
        r.checks.push_back(c1);
        r.checks.push_back(c2);
        auto row = cells({static_cast<double>(k), w.position.width, w.momentum.width, w.product, w.bound, w.uffink});
        row.push_back(c1.pass && c2.pass ? "1" : "0");
        t.rows.push_back(std::move(row));
        if (k == 0) {
            quantity(r, "width_q", w.position.width);
            quantity(r, "width_p", w.momentum.width);
            quantity(r, "product", w.product);
            quantity(r, "bound", w.bound);
            quantity(r, "uffink_bound", w.uffink);
        }
    }
    r.series.push_back(std::move(t));
}

void run_landau_pollak(const Scenario &s, Report &r) {
    const double h = 2.0 * std::numbers::pi * s.grid.hbar;
    auto areas = s.params.at("areas").get<std::vector<double>>();
    std::sort(areas.begin(), areas.end());
    Series t{"a0_vs_area", relation_text("LP-SUM"),
             {"area_over_h", "a0", "one_plus_sqrt_a0", "max_localization", "trace", "nominal_trace"}, {}, true, 0};
    for (double u : areas) {
        require(u > 0.0, ErrorKind::usage, "/params/areas: areas must be positive");
        const auto [x, y] = cell_for_area(s.grid, u * h);
        const auto a = largest_a0(s.grid, x, y);
        const auto loc = optimal_localization(s.grid, x, y);
        const double top = 1.0 + std::sqrt(a.a0);
        t.rows.push_back(cells({u, a.a0, top, loc.value, a.trace, a.nominal_trace}));
        r.checks.push_back(make_check("localization sum at area " + format_real(u), "LP-SUM", top, loc.value, 1e-6));
        r.checks.push_back(make_check("trace identity at area " + format_real(u), "LP-TRACE", 0.01 * a.nominal_trace,
                                      std::abs(a.trace - a.nominal_trace)));
    }
    r.series.push_back(std::move(t));
    if (s.params.at("min_area").get<bool>()) {
        const auto m = min_area_for_confidence(s.grid, num(s.params, "eps1"), num(s.params, "eps2"));
        quantity(r, "min_area", m.area);
        quantity(r, "min_area_over_h", m.area_over_h);
        quantity(r, "min_area_a0", m.a0);
        quantity(r, "area_bound", m.bound);
        r.checks.push_back(make_check("smallest confident cell area", "LP-AREA", m.area, m.bound));
    }
}

void run_periodic(const Scenario &s, Report &r) {
    const double a = num(s.params, "a");
    const double h = 2.0 * std::numbers::pi * s.grid.hbar;
    Series t{"commutators", relation_text("PERIODIC-COMMUTE"),
             {"a", "b", "ratio", "commute_predicted", "norm", "verdict"}, {}, false, 0};
    for (double u : s.params.at("b_units").get<std::vector<double>>()) {
        const double b = u * h;
        PeriodicSetFunction g{a, {Interval{0.0, 0.5 * a}}};
        PeriodicSetFunction f{b, {Interval{0.0, 0.5 * b}}};
        const auto c = periodic_commutator(s.grid, g, f);
        auto row = cells({a, b, c.ratio, c.commute_predicted ? 1.0 : 0.0, c.norm});
        row.push_back(c.verdict == CommutationVerdict::commute      ? "commute"
                      : c.verdict == CommutationVerdict::noncommute ? "noncommute"
                                                                    : "inconclusive");
        t.rows.push_back(std::move(row));
        const std::string label = "b = " + format_real(u) + " x 2 pi hbar";
        if (c.commute_predicted) {
            r.checks.push_back(make_check("commutator vanishes, " + label, "PERIODIC-COMMUTE", commute_threshold, c.norm, 0.0));
        } else {
            r.checks.push_back(
                make_check("commutator present, " + label, "PERIODIC-COMMUTE", c.norm, noncommute_threshold, 0.0));
        }
    }
    r.series.push_back(std::move(t));
}

void run_covariant(const Scenario &s, Report &r) {
    const double e1 = num(s.params, "eps1");
    const double e2 = num(s.params, "eps2");
    const double cellsw = num(s.params, "delta_cells");
    const auto psi = make_state(s.state, s.grid, s.seed);
    std::vector<WaveFunction> ts{make_state(s.params.at("T"), s.grid, s.seed)};
    std::mt19937_64 rng(s.seed + 7);
    for (int k = 0; k < s.params.at("random_T").get<int>(); ++k) {
        ts.push_back(random_superposition(s.grid, rng));
    }
    Series t{"measures", relation_text("UR-NOISE"),
             {"T", "marginal", "noise", "resolution", "standard_error", "distance", "error_bar_lower", "error_bar"},
             {},
             false,
             0};
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto G = gt_from_T(pure_density(ts[k]));
        auto rep = inaccuracy_measures(G, e1, e2);
        const auto bars = covariant_error_bars(G, e1, e2, cellsw * s.grid.dx, cellsw * s.grid.dp());
        const auto st = check_covariant_state_ur(psi, G);
        const std::string sfx = " (T " + std::to_string(k) + ")";
        for (auto c : rep.checks) {
            c.name += sfx;
            r.checks.push_back(c);
        }
        auto bc = bars.check;
        bc.name += sfx;
        r.checks.push_back(bc);
        auto sc = st.check;
        sc.name += sfx;
        r.checks.push_back(sc);
        for (auto c : rep.conjectures) {
            c.name += sfx;
            r.conjectures.push_back(c);
        }
        const double kk = static_cast<double>(k);
        auto rq = cells({kk});
        rq.push_back("Q");
        for (const auto &c : cells({rep.q.noise, rep.q.resolution, rep.q.standard_error, rep.q.distance,
                                    rep.q.error_bar_lower, bars.q.width})) {
            rq.push_back(c);
        }
        auto rp = cells({kk});
        rp.push_back("P");
        for (const auto &c : cells({rep.p.noise, rep.p.resolution, rep.p.standard_error, rep.p.distance,
                                    rep.p.error_bar_lower, bars.p.width})) {
            rp.push_back(c);
        }
        t.rows.push_back(std::move(rq));
        t.rows.push_back(std::move(rp));
        if (k == 0) {
            quantity(r, "noise_product", rep.q.noise * rep.p.noise);
            quantity(r, "state_spread_product", st.delta_q * st.delta_p);
            quantity(r, "standard_error_product", rep.q.standard_error * rep.p.standard_error);
            quantity(r, "distance_product", rep.q.distance * rep.p.distance);
            quantity(r, "resolution_product", rep.q.resolution * rep.p.resolution);
            quantity(r, "error_bar_product", bars.q.width * bars.p.width);
            quantity(r, "error_bar_lower_product", rep.q.error_bar_lower * rep.p.error_bar_lower);
            const double w = num(s.params, "warp");
            if (w != 0.0) {
                const auto warp = [w](double v) { return v + w * std::tanh(v); };
                require(w > -1.0, ErrorKind::usage, "/params/warp: amplitude must exceed -1 (monotone map)");
                const double lq = 0.5 * s.grid.length();
                const double lp = 0.5 * s.grid.dp() * static_cast<double>(s.grid.n_points);
                const auto g1 = MonotoneMap::tabulate(warp, -lq, lq, 801);
                const auto g2 = MonotoneMap::tabulate(warp, -lp, lp, 801);
                WarpOptions wo;
                wo.eps = e1;
                wo.delta_q = cellsw * s.grid.dx;
                wo.delta_p = cellsw * s.grid.dp();
                const auto wr = warp_observable(psi, G, g1, g2, wo);
                quantity(r, "warp_covariance_defect", wr.covariance_defect);
                quantity(r, "warp_error_bar_q", wr.error_bar_q.width);
                quantity(r, "warp_error_bar_p", wr.error_bar_p.width);
                quantity(r, "plain_error_bar_q", wr.plain_error_bar_q.width);
                quantity(r, "plain_error_bar_p", wr.plain_error_bar_p.width);
                r.series.push_back(density_series("warped_marginal_q", "warped position marginal", wr.marginal_q));
            }
        }
    }
    r.series.insert(r.series.begin(), std::move(t));
}

void run_husimi(const Scenario &s, Report &r) {
    const auto psi = make_state(s.state, s.grid, s.seed);
    const auto G = gt_from_T(pure_density(make_state(s.params.at("T"), s.grid, s.seed)));
    const auto stride = s.params.at("stride").get<long long>();
    require(stride >= 1, ErrorKind::usage, "/params/stride: must be positive");
    const auto H = husimi(psi, G, static_cast<std::size_t>(stride));
    quantity(r, "mass", H.mass());
    if (stride == 1) {
        quantity(r, "marginal_q_defect", total_variation(H.marginal_q(), smear(position_density(psi), G.mu)));
        quantity(r, "marginal_p_defect", total_variation(H.marginal_p(), smear(momentum_density(psi), G.nu)));
    }
    Series t{"husimi", "phase-space density of G^T in psi", {"q", "p", "density"}, {}, true, H.np};
    for (std::size_t i = 0; i < H.nq; ++i) {
        for (std::size_t k = 0; k < H.np; ++k) {
            t.rows.push_back(cells({H.q0 + H.dq * static_cast<double>(i), H.p0 + H.dp * static_cast<double>(k), H.at(i, k)}));
        }
    }
    r.series.push_back(std::move(t));
}

void run_werner(const Scenario &s, Report &r) {
    WernerSearchOptions o;
    o.basis_size = s.params.at("basis_size").get<int>();
    o.budget = s.params.at("budget").get<int>();
    o.starts = s.params.at("starts").get<int>();
    o.seed = s.seed;
    const auto w = werner_constant_search(o);
    quantity(r, "c_est", w.c_est);
    quantity(r, "excited_mass", w.excited_mass);
    quantity(r, "evaluations", w.evaluations);
    quantity(r, "best_start", w.best_start);
    quantity(r, "converged", w.converged ? 1.0 : 0.0);
    const auto phi = werner_state(s.grid, w.coefficients);
    const auto G = gt_from_T(pure_density(phi));
    quantity(r, "grid_distance_product", G.mu.abs_first_moment * G.nu.abs_first_moment / s.grid.hbar);
    r.checks.push_back(make_check("searched distance product", "UR-DISTANCE", w.c_est, werner_constant - 1e-3));
    r.checks.push_back(make_check("search does not exceed the Gaussian value", "UR-DISTANCE", 1.0 / std::numbers::pi, w.c_est));
    Series t{"convergence", relation_text("UR-DISTANCE"), {"evaluation", "start", "value", "best"}, {}, true, 0};
    for (const auto &e : w.log) {
        t.rows.push_back(cells({static_cast<double>(e.evaluation), static_cast<double>(e.start), e.value, e.best}));
    }
    r.series.push_back(std::move(t));
    Series c{"coefficients", "oscillator-basis coefficients of the optimizer", {"n", "c_n"}, {}, false, 0};
    for (std::size_t n = 0; n < w.coefficients.size(); ++n) {
        c.rows.push_back(cells({static_cast<double>(n), w.coefficients[n]}));
    }
    r.series.push_back(std::move(c));
}

void run_sequential(const Scenario &s, Report &r) {
    const auto psi = make_state(s.state, s.grid, s.seed);
    const auto probe = gaussian(s.grid, num(s.params, "probe_a"));
    const auto I = build_instrument(probe, num(s.params, "lambda"), s.grid);
    DisturbanceOptions o;
    o.eps1 = num(s.params, "eps1");
    o.eps2 = num(s.params, "eps2");
    o.delta_cells = num(s.params, "delta_cells");
    const auto d = disturbance_report(I, psi, o);
    add_checks(r, d.checks);
    r.conjectures = d.conjectures;
    quantity(r, "kraus_completeness_error", kraus_completeness_error(I));
    quantity(r, "m1_defect", d.m1_defect);
    quantity(r, "m2_defect", d.m2_defect);
    quantity(r, "mu_variance", d.mu.variance);
    quantity(r, "nu_variance", d.nu.variance);
    quantity(r, "standard_error_product", d.standard_error_q * d.standard_error_p);
    quantity(r, "distance_product", d.distance_q * d.distance_p);
    quantity(r, "error_bar_product", d.error_bar_q.width * d.error_bar_p.width);
    const auto joint = sequential_joint(I, psi);
    const auto H = husimi(psi, gt_from_T(pure_density(davies_state(I))));
    double diff = 0.0;
    for (std::size_t i = 0; i < joint.weights.size(); ++i) {
        diff = std::max(diff, std::abs(joint.weights[i] - H.weights[i]));
    }
    quantity(r, "davies_max_difference", diff);

    const auto out = outcome_density(I, psi);
    const auto ref_q = smear(position_density(psi), d.mu);
    Series mq{"position_marginal", "first marginal vs prob^Q * mu", {"q", "outcome_density", "smeared_reference"}, {}, true, 0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        mq.rows.push_back(cells({out.coord(i), out.weights[i], sample_at(ref_q, out.coord(i))}));
    }
    const auto ref_p = smear(d.prior_momentum, d.nu);
    Series mp{"momentum_marginal", "second marginal vs prob^P * nu",
              {"p", "prior", "post_measurement", "smeared_reference"}, {}, true, 0};
    for (std::size_t k = 0; k < d.post_momentum.size(); ++k) {
        const double p = d.post_momentum.coord(k);
        mp.rows.push_back(cells({p, d.prior_momentum.weights[k], d.post_momentum.weights[k], sample_at(ref_p, p)}));
    }
    Series tr{"tradeoffs", "inaccuracy x disturbance products", {"tag", "lhs", "rhs", "pass"}, {}, false, 0};
    for (const auto &c : d.checks) {
        tr.rows.push_back({c.tag, format_real(c.lhs), format_real(c.rhs), c.pass ? "1" : "0"});
    }
    r.series.push_back(std::move(mq));
    r.series.push_back(std::move(mp));
    r.series.push_back(std::move(tr));
}

void run_arthurs_kelly(const Scenario &s, Report &r) {
    const auto psi = make_state(s.state, s.grid, s.seed);
    const auto p1 = gaussian(s.grid, num(s.params, "probe1_a"));
    const auto p2 = gaussian(s.grid, num(s.params, "probe2_a"));
    AKParams base{num(s.params, "lambda"), num(s.params, "kappa"), 0.0};
    const auto st = ak_gamma_study(s.params.at("gammas").get<std::vector<double>>(), base, psi, p1, p2,
                                   s.params.at("simulate").get<bool>());
    const double h2 = s.grid.hbar * s.grid.hbar;
    Series t{"gamma_sweep", relation_text("AK-NOISE"),
             {"gamma", "mu_var", "nu_var", "quantum", "disturbance", "product", "bound", "pass"}, {}, true, 0};
    for (const auto &row : st.rows) {
        const bool ok = std::all_of(row.checks.begin(), row.checks.end(), [](const BoundCheck &c) { return c.pass; });
        auto cs = cells({row.params.gamma, row.mu_var, row.nu_var, row.quantum, row.disturbance, row.product, h2 / 4.0});
        cs.push_back(ok ? "1" : "0");
        t.rows.push_back(std::move(cs));
        for (auto c : row.checks) {
            c.name += " (gamma " + format_real(row.params.gamma) + ")";
            r.checks.push_back(c);
        }
        if (row.params.gamma == 0.0) {
            quantity(r, "mu_var", row.mu_var);
            quantity(r, "nu_var", row.nu_var);
            quantity(r, "quantum", row.quantum);
            quantity(r, "disturbance", row.disturbance);
            quantity(r, "x", row.x);
            quantity(r, "product", row.product);
        }
    }
    r.series.push_back(std::move(t));
    Series sim{"simulation", "three-body simulation vs variance addition",
               {"gamma", "var_q", "expected_var_q", "rel_error_q", "var_p", "expected_var_p", "rel_error_p", "agrees"},
               {},
               false,
               0};
    for (const auto &m : st.simulations) {
        auto cs = cells({m.gamma, m.var_q, m.expected_var_q, m.rel_error_q, m.var_p, m.expected_var_p, m.rel_error_p});
        cs.push_back(m.agrees ? "1" : "0");
        sim.rows.push_back(std::move(cs));
        if (!m.agrees) {
            r.failures.push_back("simulation differs from the analytic variances at gamma " + format_real(m.gamma));
        }
    }
    r.series.push_back(std::move(sim));
}

} // namespace

Report run_scenario(const Scenario &s) {
    clear_warnings();
    Report r;
    r.scenario = s.name;
    r.command = s.command;
    r.provenance["command"] = std::string(to_string(s.command));
    r.provenance["grid"] = json{{"n_points", s.grid.n_points}, {"x_min", s.grid.x_min}, {"dx", s.grid.dx}};
    r.provenance["hbar"] = s.grid.hbar;
    r.provenance["seed"] = s.seed;
    r.provenance["state"] = s.state;
    r.provenance["params"] = s.params;
    switch (s.command) {
    case Command::prep_ur:
        run_prep_ur(s, r);
        break;
    case Command::overall_width:
        run_overall_width(s, r);
        break;
    case Command::landau_pollak:
        run_landau_pollak(s, r);
        break;
    case Command::periodic:
        run_periodic(s, r);
        break;
    case Command::covariant:
        run_covariant(s, r);
        break;
    case Command::husimi:
        run_husimi(s, r);
        break;
    case Command::werner_constant:
        run_werner(s, r);
        break;
    case Command::sequential:
        run_sequential(s, r);
        break;
    case Command::arthurs_kelly:
        run_arthurs_kelly(s, r);
        break;
    case Command::suite:
        fail(ErrorKind::usage, "suite is not a single scenario");
    }
    for (const auto &w : take_warnings()) {
        r.warnings.push_back(std::string(to_string(w.kind)) + ": " + w.message);
    }
    return r;
}

namespace {

json check_json(const BoundCheck &c) {
    return json{{"name", c.name}, {"tag", c.tag},       {"lhs", c.lhs},
                {"rhs", c.rhs},   {"margin", c.margin}, {"pass", c.pass}};
}

} // namespace

void write_report(const Report &r, const std::filesystem::path &dir) {
    json j;
    j["scenario"] = r.scenario;
    j["provenance"] = r.provenance;
    json q = json::object();
    for (const auto &[k, v] : r.quantities) {
        q[k] = v;
    }
    j["quantities"] = q;
    j["checks"] = json::array();
    for (const auto &c : r.checks) {
        j["checks"].push_back(check_json(c));
    }
    j["conjectures"] = json::array();
    for (const auto &c : r.conjectures) {
        j["conjectures"].push_back(check_json(c));
    }
    j["warnings"] = r.warnings;
    j["failures"] = r.failures;
    j["pass"] = r.passed();
    io::write_atomic(dir / "report.json", j.dump(2) + "\n");

    io::Table qt{{"quantity", "value"}, {}};
    for (const auto &[k, v] : r.quantities) {
        qt.add({k, format_real(v)});
    }
    io::write_atomic(dir / "quantities.csv", qt.to_csv());

    io::Table ct{{"kind", "name", "tag", "lhs", "rhs", "margin", "pass"}, {}};
    for (const auto &c : r.checks) {
        ct.add({"bound", c.name, c.tag, format_real(c.lhs), format_real(c.rhs), format_real(c.margin), c.pass ? "1" : "0"});
    }
    for (const auto &c : r.conjectures) {
        ct.add({"conjecture", c.name, c.tag, format_real(c.lhs), format_real(c.rhs), format_real(c.margin),
                c.pass ? "1" : "0"});
    }
    io::write_atomic(dir / "checks.csv", ct.to_csv());

    for (const auto &s : r.series) {
        io::Table t{s.columns, s.rows};
        io::write_atomic(dir / (s.name + ".csv"), t.to_csv());
        if (s.plot) {
            emit_plotdata(r, s.name, dir);
        }
    }
}

std::filesystem::path emit_plotdata(const Report &r, std::string_view name, const std::filesystem::path &dir) {
    const Series *s = r.find_series(name);
    require(s != nullptr, ErrorKind::usage, "report has no series '" + std::string(name) + "'");
    std::string out = "# " + r.scenario + " / " + s->name + "\n# " + s->relation + "\n#";
    for (const auto &c : s->columns) {
        out += ' ' + c;
    }
    out += '\n';
    for (std::size_t i = 0; i < s->rows.size(); ++i) {
        if (s->block > 0 && i > 0 && i % s->block == 0) {
            out += '\n';
        }
        for (std::size_t k = 0; k < s->rows[i].size(); ++k) {
            if (k) {
                out += ' ';
            }
            out += s->rows[i][k];
        }
        out += '\n';
    }
    const auto path = dir / (s->name + ".dat");
    io::write_atomic(path, out);
    return path;
}

std::vector<Report> run_batch(const std::vector<Scenario> &scenarios, int jobs) {
    std::vector<Report> reports(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                reports[i] = run_scenario(scenarios[i]);
                write_report(reports[i], scenarios[i].out_dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, jobs));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(n, scenarios.size()); ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return reports;
}

std::vector<Scenario> suite_scenarios(const Overrides &ov) {
    std::vector<Scenario> out;
    Overrides o = ov;
    o.params = json::object();
    if (!o.out_dir) {
        o.out_dir = std::filesystem::path("out");
    }
    for (Command c : all_commands()) {
        out.push_back(parse_scenario(default_document(c), o));
    }
    return out;
}

int exit_status(const std::vector<Report> &reports) {
    return std::all_of(reports.begin(), reports.end(), [](const Report &r) { return r.passed(); }) ? 0 : 2;
}

} // namespace ulab
