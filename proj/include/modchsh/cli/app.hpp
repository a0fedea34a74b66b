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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modchsh::cli {

/// Configuration error; the message names the offending key or flag.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { point, sweep, threshold, grating, sample };

const char* command_name(Command c);

/// Resolved run configuration. Packet parameters are fractions of their
/// periods: ax, sx of ℓ; ap, sp of h/ℓ.
struct RunConfig {
    Command command = Command::point;
    std::string preset;

    double ell = 1.0;
    double ax = 0.0;
    double ap = 0.0;
    double sx = 0.0;
    double sp = 0.0;

    int resolution = 64;
    int points = 32;
    std::vector<double> grid;
    double sx_lo = 0.01;
    double sx_hi = 0.08;
    double tolerance = 1e-5;

    double L = 1.0;
    double kappa = 0.2 * 3.14159265358979323846;
    double sigma = 10.0;
    double shift = 0.0;
    double slope = 0.0;
    bool compare = false;
    std::string wavefunction_out;

    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    double phi = 0.0;

    unsigned workers = 1;
    std::string out;
    std::string report;
    bool timing = false;
};

/// Keys accepted in a config file (also the JSON echo keys).
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines ('#' starts a comment) into a key/value map.
/// Throws ConfigError naming the key on unknown keys or malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies one key/value pair; throws ConfigError naming the key.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Sets the parameter family of a figure preset (fig1a or fig1b).
void apply_preset(RunConfig& config, const std::string& name);

/// Range checks; throws ConfigError naming the key.
void validate(const RunConfig& config);

/// `path` resolved against $MODCHSH_OUT_DIR when it is relative.
std::string output_path(const std::string& path);

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 success, 1 usage or config error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modchsh::cli
