// Copyright 2026 The modchsh Authors
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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modchsh/cli/app.hpp"

namespace modchsh::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) {
        throw ConfigError("invalid value for '" + key + "': '" + v + "' is not a finite number");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) {
        throw ConfigError("invalid value for '" + key + "': '" + v + "' is not a nonnegative integer");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    const std::uint64_t u = parse_u64(key, v);
    if (u > 1u << 30) throw ConfigError("invalid value for '" + key + "': '" + v + "' is too large");
    return static_cast<int>(u);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("invalid value for '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("invalid value for '" + key + "': " + what);
}

bool fraction(double v) { return v >= 0.0 && v < 1.0; }

}  // namespace

const char* command_name(Command c) {
    switch (c) {
        case Command::point: return "point";
        case Command::sweep: return "sweep";
        case Command::threshold: return "threshold";
        case Command::grating: return "grating";
        case Command::sample: return "sample";
    }
    return "?";
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "preset", "ell", "ax", "ap", "sx", "sp", "resolution", "points", "grid", "sx_lo", "sx_hi",
        "tolerance", "L", "kappa", "sigma", "shift", "slope", "compare", "wavefunction", "shots",
        "seed", "phi", "workers", "out", "report", "timing"};
    return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (value.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty value for '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "preset") c.preset = value;
    else if (key == "ell") c.ell = parse_double(key, value);
    else if (key == "ax") c.ax = parse_double(key, value);
    else if (key == "ap") c.ap = parse_double(key, value);
    else if (key == "sx") c.sx = parse_double(key, value);
    else if (key == "sp") c.sp = parse_double(key, value);
    else if (key == "resolution") c.resolution = parse_int(key, value);
    else if (key == "points") c.points = parse_int(key, value);
    else if (key == "grid") c.grid = parse_list(key, value);
    else if (key == "sx_lo") c.sx_lo = parse_double(key, value);
    else if (key == "sx_hi") c.sx_hi = parse_double(key, value);
    else if (key == "tolerance") c.tolerance = parse_double(key, value);
    else if (key == "L") c.L = parse_double(key, value);
    else if (key == "kappa") c.kappa = parse_double(key, value);
    else if (key == "sigma") c.sigma = parse_double(key, value);
    else if (key == "shift") c.shift = parse_double(key, value);
    else if (key == "slope") c.slope = parse_double(key, value);
    else if (key == "compare") c.compare = parse_bool(key, value);
    else if (key == "wavefunction") c.wavefunction_out = value;
    else if (key == "shots") c.shots = parse_u64(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "phi") c.phi = parse_double(key, value);
    else if (key == "workers") c.workers = static_cast<unsigned>(parse_int(key, value));
    else if (key == "out") c.out = value;
    else if (key == "report") c.report = value;
    else if (key == "timing") c.timing = parse_bool(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

void apply_preset(RunConfig& c, const std::string& name) {
    if (name == "fig1a") {
        c.ap = 0.0;
        c.sp = 0.0;
    } else if (name == "fig1b") {
        c.ap = 0.1;
        c.sp = 0.1;
    } else {
        throw ConfigError("invalid value for 'preset': '" + name + "' (expected fig1a or fig1b)");
    }
    c.preset = name;
}

void validate(const RunConfig& c) {
    require(c.ell > 0.0, "ell", "must be positive");
    require(c.ax >= 0.0 && c.ax < 0.5, "ax", "must lie in [0, 0.5)");
    require(fraction(c.ap), "ap", "must lie in [0, 1)");
    require(fraction(c.sx), "sx", "must lie in [0, 1)");
    require(fraction(c.sp), "sp", "must lie in [0, 1)");
    const bool pow2 = c.resolution > 0 && (c.resolution & (c.resolution - 1)) == 0;
    require(pow2 && c.resolution >= 16 && c.resolution <= 512, "resolution", "must be a power of two in [16, 512]");
    require(c.tolerance > 0.0, "tolerance", "must be positive");
    for (double g : c.grid) require(g >= 0.0 && g < 0.5, "grid", "entries must lie in [0, 0.5)");
    require(c.L > 0.0, "L", "must be positive");
    require(c.kappa > 0.0, "kappa", "must be positive");
    require(c.sigma > 0.0, "sigma", "must be positive");
    require(c.shots >= 1, "shots", "must be at least 1");
    require(c.workers >= 1 && c.workers <= 256, "workers", "must lie in [1, 256]");
}

std::string output_path(const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    const char* dir = std::getenv("MODCHSH_OUT_DIR");
    if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
    return (fs::path(dir) / p).string();
}

}  // namespace modchsh::cli
