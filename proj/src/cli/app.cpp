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
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "modchsh/cli/app.hpp"
#include "modchsh/errors.hpp"
#include "modchsh/modular_space.hpp"
#include "modchsh/photonics.hpp"

namespace modchsh::cli {
namespace {

using json = nlohmann::ordered_json;
namespace mod = modchsh::modular;
namespace ph = modchsh::photonics;

constexpr std::size_t kMaxGratingNodes = 5'000'000;

struct Output {
    std::ostream& out;
    std::ostream& err;
    std::chrono::steady_clock::time_point start;
};

std::string render(const RunConfig& c, json report, const Output& o) {
    if (c.timing) {
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - o.start).count();
    }
    return report.dump(2) + "\n";
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = command_name(c.command);
    j["preset"] = c.preset;
    switch (c.command) {
        case Command::point:
        case Command::sweep:
        case Command::threshold:
        case Command::sample:
            j["ell"] = c.ell;
            j["ax"] = c.ax;
            j["ap"] = c.ap;
            j["sx"] = c.sx;
            j["sp"] = c.sp;
            j["resolution"] = c.resolution;
            break;
        case Command::grating:
            j["L"] = c.L;
            j["kappa"] = c.kappa;
            j["sigma"] = c.sigma;
            j["shift"] = c.shift;
            j["slope"] = c.slope;
            break;
    }
    if (c.command == Command::point) j["phi"] = c.phi;
    if (c.command == Command::sweep) {
        j["points"] = c.grid.empty() ? c.points : static_cast<int>(c.grid.size());
        j["grid"] = c.grid.empty() ? "midpoint" : "explicit";
    }
    if (c.command == Command::threshold) {
        j["sx_lo"] = c.sx_lo;
        j["sx_hi"] = c.sx_hi;
        j["tolerance"] = c.tolerance;
    }
    if (c.command == Command::sample) {
        j["shots"] = c.shots;
        j["seed"] = c.seed;
    }
    return j;
}

void write_file(const std::string& path, const std::string& text) {
    const std::string resolved = output_path(path);
    std::ofstream f(resolved, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + resolved + "'");
    f << text;
    if (!f) throw ConfigError("failed writing output file '" + resolved + "'");
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

mod::ModularWavepacket packet_of(const RunConfig& c) { return mod::ModularWavepacket::make(c.ax, c.ap, c.sx, c.sp); }

// JSON-only commands print the report to stdout and copy it to --out/--report.
void emit_report(const RunConfig& c, const json& report, const Output& o) {
    const std::string text = render(c, report, o);
    o.out << text;
    if (!c.out.empty()) write_file(c.out, text);
    if (!c.report.empty()) write_file(c.report, text);
}

// CSV commands write data to --out (or stdout) and the report to --report
// (or stdout when the CSV went to a file).
void emit_data(const RunConfig& c, const std::string& csv, const json& report, const Output& o) {
    const std::string text = render(c, report, o);
    if (c.out.empty()) {
        o.out << csv;
    } else {
        write_file(c.out, csv);
        if (c.report.empty()) o.out << text;
    }
    if (!c.report.empty()) write_file(c.report, text);
}

int run_point(const RunConfig& c, json& report, const Output& o) {
    const mod::ModularWavepacket p = packet_of(c);
    const mod::BellEstimate e = mod::estimate_bell(p, p, c.resolution);
    const ph::MachZehnderOutcome mz = ph::mach_zehnder_probs(p, c.phi, mod::branch_f(), c.resolution);
    json r;
    r["bell_value"] = e.value;
    r["delta"] = e.delta;
    r["resolution"] = e.resolution;
    r["converged"] = e.converged;
    r["delta_limit_bell"] = mod::delta_limit_bell(c.ax, mod::ModularFrame(1.0));
    r["violates_local_bound"] = e.value > mod::kLocalBound;
    r["mach_zehnder"] = {{"phi", mz.phi}, {"p_plus", mz.p_plus}, {"p_minus", mz.p_minus}};
    report["result"] = r;
    emit_report(c, report, o);
    if (!e.converged) {
        o.err << fmt::format("error: quadrature did not converge (delta {:.3g})\n", e.delta);
        return 2;
    }
    return 0;
}

int run_sweep(const RunConfig& c, json& report, const Output& o) {
    std::vector<double> grid = c.grid;
    if (grid.empty()) {
        if (c.points < 1) throw ConfigError("invalid value for 'points': sweep grid is empty");
        grid = mod::midpoint_grid(c.points);
    }
    const mod::SweepResult s = mod::sweep_ax(packet_of(c), grid, c.resolution, c.workers);

    std::string csv = "a_xbar_frac,bell_value,converged\n";
    double argmax = 0.0;
    double best = -INFINITY;
    for (const auto& row : s.rows) {
        csv += fmt::format("{},{},{}\n", num(row.ax), num(row.value), row.converged ? 1 : 0);
        if (row.value > best) {
            best = row.value;
            argmax = row.ax;
        }
    }
    const std::size_t ok = s.converged_rows();
    json r;
    r["rows"] = s.rows.size();
    r["converged_rows"] = ok;
    r["max_value"] = s.max_value();
    r["argmax_ax"] = argmax;
    r["max_delta"] = s.max_delta();
    if (c.ap == 0.0 && c.sp == 0.0) {
        double gap = 0.0;
        for (const auto& row : s.rows) {
            gap = std::max(gap, std::abs(row.value - mod::delta_limit_bell(row.ax, mod::ModularFrame(1.0))));
        }
        r["delta_limit_sup_gap"] = gap;
    }
    report["result"] = r;
    emit_data(c, csv, report, o);
    if (10 * ok < 9 * s.rows.size()) {
        o.err << fmt::format("error: only {} of {} rows converged\n", ok, s.rows.size());
        return 2;
    }
    return 0;
}

int run_threshold(const RunConfig& c, json& report, const Output& o) {
    mod::ThresholdOptions opts;
    opts.tolerance = c.tolerance;
    const mod::ModularWavepacket tmpl = mod::ModularWavepacket::make(c.ax, c.ap, c.sx_lo, c.sp);
    const mod::ThresholdResult t = mod::violation_threshold(tmpl, c.sx_lo, c.sx_hi, c.resolution, opts);
    json r;
    r["sigma_star"] = t.sigma_star;
    r["bracket"] = {c.sx_lo, c.sx_hi};
    r["final_bracket"] = {t.lo, t.hi};
    r["iterations"] = t.iterations;
    json evals = json::array();
    for (const auto& e : t.evaluations) evals.push_back({{"sx", e.sx}, {"ax", e.ax}, {"max_bell", e.value}});
    r["inner_max"] = evals;
    report["result"] = r;
    emit_report(c, report, o);
    return 0;
}

int run_grating(const RunConfig& c, json& report, const Output& o) {
    const ph::GratingSpec spec{c.L, c.kappa, c.sigma, c.shift, c.slope};
    ph::ModularMapping m;
    try {
        m = ph::grating_to_modular(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    json r;
    r["ell"] = m.frame.ell();
    r["sigma_xbar"] = m.sigma_xbar;
    r["sigma_pbar"] = m.sigma_pbar;
    r["sigma_pbar_over_period"] = m.sigma_pbar / m.frame.momentum_period();
    r["packet"] = {{"ax", m.packet.ax}, {"ap", m.packet.ap}, {"sx", m.packet.sx}, {"sp", m.packet.sp}};
    r["validity_ratio"] = m.validity_ratio;
    r["warning"] = m.warning;
    r["swap_success_probability"] = ph::kSwapSuccessProbability;

    if (c.compare || !c.wavefunction_out.empty()) {
        const int nodes = std::max(64, static_cast<int>(std::ceil(8.0 * std::numbers::pi / c.kappa)) + 1);
        const double span = 2.0 * (5.0 * c.sigma + c.L);
        if (span / (c.L / nodes) > static_cast<double>(kMaxGratingNodes)) {
            throw ConfigError("invalid value for 'sigma': sampled wavefunction would exceed " +
                              std::to_string(kMaxGratingNodes) + " nodes");
        }
        if (c.compare) {
            const ph::WrapComparison w = ph::wrap_and_compare(spec, nodes);
            r["density_gap"] = w.density_gap;
            r["amplitude_gap"] = w.amplitude_gap;
        }
        if (!c.wavefunction_out.empty()) {
            const std::vector<double> x = ph::grating_grid(spec, nodes);
            const auto psi = ph::grating_wavefunction(spec, x);
            std::string csv = "x,re,im\n";
            for (std::size_t i = 0; i < x.size(); ++i) {
                csv += fmt::format("{},{},{}\n", num(x[i]), num(psi[i].real()), num(psi[i].imag()));
            }
            write_file(c.wavefunction_out, csv);
            r["wavefunction_nodes"] = x.size();
        }
    }
    report["result"] = r;
    emit_report(c, report, o);
    if (m.warning) o.err << fmt::format("warning: L/sigma = {:.3g} exceeds {}\n", m.validity_ratio, ph::kValidityRatioWarn);
    return 0;
}

int run_sample(const RunConfig& c, json& report, const Output& o) {
    const mod::ModularWavepacket p = packet_of(c);
    const ph::ChshTables tables = ph::chsh_tables(p, p, c.resolution);
    const ph::ChshCounts counts = ph::sample_coincidences(tables, c.shots, c.seed);
    const ph::EmpiricalChsh e = ph::empirical_chsh(counts);
    const double analytic = ph::chsh_from_tables(tables);

    std::string csv = "setting_a,setting_b,kk,kl,lk,ll\n";
    for (const auto& t : counts) {
        csv += fmt::format("{},{},{},{},{},{}\n", num(t.phi_a), num(t.phi_b), t.counts.n[0][0], t.counts.n[0][1],
                           t.counts.n[1][0], t.counts.n[1][1]);
    }
    json r;
    r["analytic_chsh"] = analytic;
    r["empirical_chsh"] = e.value;
    r["std_error"] = e.std_error;
    r["z_score"] = e.std_error > 0.0 ? (e.value - analytic) / e.std_error : 0.0;
    r["shots_per_setting"] = c.shots;
    report["result"] = r;
    emit_data(c, csv, report, o);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modular-variables CHSH simulator", "modchsh"};
    app.require_subcommand(1);
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
    std::string config_path;
    bool timing = false;
    bool compare = false;
    app.add_option("--config", config_path, "flat key = value config file");
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"out", "output file (CSV for sweep/sample, JSON otherwise)"},
        {"report", "JSON report file"},
        {"resolution", "Gauss-Legendre nodes per panel (power of two, 16..512)"},
        {"seed", "sampling seed"},
        {"preset", "fig1a or fig1b"},
        {"ell", "modular scale"},
        {"ax", "packet center a_x (fraction of ell, [0, 0.5))"},
        {"ap", "packet center a_p (fraction of h/ell)"},
        {"sx", "packet width sigma_x (fraction of ell)"},
        {"sp", "packet width sigma_p (fraction of h/ell)"},
        {"points", "sweep midpoint-grid size"},
        {"grid", "explicit comma-separated a_x grid"},
        {"sx_lo", "threshold bracket lower end"},
        {"sx_hi", "threshold bracket upper end"},
        {"tolerance", "threshold bisection tolerance"},
        {"shots", "photon pairs per setting pair"},
        {"phi", "Mach-Zehnder setting (0 or pi/2)"},
        {"kappa", "grating comb parameter"},
        {"L", "slit distance"},
        {"sigma", "envelope width"},
        {"shift", "transverse grating shift"},
        {"slope", "SLM phase slope"},
        {"wavefunction", "write the sampled grating wavefunction here"},
        {"workers", "sweep worker threads"},
    };
    for (const auto& [key, help] : flags) {
        std::string name = "--" + key;
        std::replace(name.begin(), name.end(), '_', '-');
        opts[key] = app.add_option(name, values[key], help);
    }
    app.add_flag("--timing", timing, "add wall time to the report");
    app.add_flag("--compare", compare, "grating: sample the wavefunction and compare with the packet");

    std::map<std::string, Command> commands = {{"point", Command::point},
                                               {"sweep", Command::sweep},
                                               {"threshold", Command::threshold},
                                               {"grating", Command::grating},
                                               {"sample", Command::sample}};
    const std::map<std::string, std::string> descriptions = {
        {"point", "Bell expectation for one packet pair"},
        {"sweep", "Bell expectation over a grid of a_x"},
        {"threshold", "width at which the maximum crosses the local bound"},
        {"grating", "map grating parameters to a modular packet"},
        {"sample", "finite-shot coincidence counts for the four setting pairs"}};
    for (const auto& [name, desc] : descriptions) app.add_subcommand(name, desc)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.command = commands.at(app.get_subcommands().front()->get_name());
    json report;
    try {
        std::map<std::string, std::string> file;
        if (!config_path.empty()) file = read_config_file(config_path);
        std::string preset;
        if (auto it = file.find("preset"); it != file.end()) preset = it->second;
        if (opts["preset"]->count() > 0) preset = values["preset"];
        if (!preset.empty()) apply_preset(cfg, preset);
        for (const auto& [k, v] : file) {
            if (k != "preset") apply_setting(cfg, k, v);
        }
        for (const auto& [key, opt] : opts) {
            if (key != "preset" && opt->count() > 0) apply_setting(cfg, key, values[key]);
        }
        if (timing) cfg.timing = true;
        if (compare) cfg.compare = true;
        validate(cfg);

        report["config"] = config_json(cfg);
        const Output o{out, err, start};
        int code = 0;
        switch (cfg.command) {
            case Command::point: code = run_point(cfg, report, o); break;
            case Command::sweep: code = run_sweep(cfg, report, o); break;
            case Command::threshold: code = run_threshold(cfg, report, o); break;
            case Command::grating: code = run_grating(cfg, report, o); break;
            case Command::sample: code = run_sample(cfg, report, o); break;
        }
        return code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace modchsh::cli
