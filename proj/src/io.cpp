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

#include "ulab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ulab/error.hpp"

namespace ulab::io {

std::string format_real(double v) {
    if (v == 0.0) {
        return "0"; // folds -0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void Table::add(std::vector<std::string> row) {
    require(row.size() == columns.size(), ErrorKind::usage, "table row has the wrong number of cells");
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(columns);
    for (const auto &r : rows) {
        line(r);
    }
    return out;
}

void write_atomic(const std::filesystem::path &path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(f), ErrorKind::usage, "cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        require(static_cast<bool>(f), ErrorKind::usage, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::usage, "cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string wavefunction_csv(const WaveFunction &psi) {
    const auto &g = psi.grid();
    nlohmann::ordered_json h;
    h["n_points"] = g.n_points;
    h["x_min"] = g.x_min;
    h["dx"] = g.dx;
    h["hbar"] = g.hbar;
    h["rep"] = psi.rep() == Rep::position ? "position" : "momentum";
    std::string out = "# " + h.dump() + "\n";
    out += psi.rep() == Rep::position ? "x,re,im\n" : "p,re,im\n";
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const auto a = psi.amplitudes()[i];
        out += format_real(psi.coordinate(i)) + ',' + format_real(a.real()) + ',' + format_real(a.imag()) + '\n';
    }
    return out;
}

WaveFunction parse_wavefunction_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && line.rfind("# ", 0) == 0, ErrorKind::usage,
            "wave-function file must start with a '# {json}' grid line");
    GridSpec g;
    Rep rep = Rep::position;
    try {
        const auto h = nlohmann::json::parse(line.substr(2));
        g.n_points = h.at("n_points").get<std::size_t>();
        g.x_min = h.at("x_min").get<double>();
        g.dx = h.at("dx").get<double>();
        g.hbar = h.value("hbar", 1.0);
        const auto r = h.value("rep", std::string("position"));
        require(r == "position" || r == "momentum", ErrorKind::usage, "rep must be position or momentum");
        rep = r == "position" ? Rep::position : Rep::momentum;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::usage, std::string("bad wave-function header: ") + e.what());
    }
    g.validate();
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::usage, "missing column header");
    std::vector<cplx> amps;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        double c = 0.0;
        double re = 0.0;
        double im = 0.0;
        require(std::sscanf(line.c_str(), "%lf,%lf,%lf", &c, &re, &im) == 3, ErrorKind::usage,
                "bad wave-function row: " + line);
        amps.emplace_back(re, im);
    }
    require(amps.size() == g.n_points, ErrorKind::usage, "row count differs from n_points");
    return WaveFunction::normalized(g, std::move(amps), rep);
}

void write_wavefunction(const std::filesystem::path &path, const WaveFunction &psi) {
    write_atomic(path, wavefunction_csv(psi));
}

WaveFunction read_wavefunction(const std::filesystem::path &path) { return parse_wavefunction_csv(read_file(path)); }

std::string density_csv(const ProbabilityDensity &d) {
    std::string out = "coordinate,density\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += format_real(d.coord(i)) + ',' + format_real(d.weights[i]) + '\n';
    }
    return out;
}

} // namespace ulab::io
