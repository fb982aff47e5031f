// Copyright 2026 The mipt Authors
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

// Command-line entry point.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 invalid configuration,
// 3 failed self-check.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mipt/campaign.h"
#include "mipt/selftest.h"
#include "mipt/stats.h"

using namespace mipt;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

/// Config-key flags shared by campaign subcommands.
struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> values;

    void attach(CLI::App *app) {
        app->add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
        for (const auto &key : config_keys()) {
            app->add_option("--" + key, values[key], "config key " + key);
        }
    }

    CampaignConfig build(CampaignConfig base, CLI::App *app) const {
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            std::stringstream ss;
            ss << f.rdbuf();
            base = parse_key_values(ss.str(), base);
        }
        for (const auto &key : config_keys()) {
            if (app->count("--" + key) > 0) {
                set_key(base, key, values.at(key));
            }
        }
        base.validate();
        return base;
    }
};

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("cannot write " + path);
    }
    f << text;
}

int cmd_selftest(int programs, uint64_t born_samples, bool inject) {
    std::cout << "cross-backend oracle (" << programs << " random programs per family, L_x <= 10)\n";
    auto checks = cross_backend_checks(cross_backend(programs, 10, 2026));

    LatticeSpec s{2, 2, Boundary::Open, Protocol::SurfaceCode};
    std::function<void(CircuitProgram &)> mutate;
    if (inject) {
        mutate = flip_first_zz_sign;
        std::cout << "injecting a sign fault into the first ZZ gate of every enumerated program\n";
    }
    for (auto [t, p] : {std::pair{0.09, 0.75}, std::pair{0.5, 1.0}}) {
        BornReport b = born_check(s, t, p, born_samples, 77, mutate);
        std::string name = "Born identity TV at t = " + std::to_string(t) + ", p_meas = " + std::to_string(p);
        CheckResult c{name, b.tv, 4 * b.noise, b.tv < 4 * b.noise && !b.impossible_sampled,
                      std::to_string(b.configs) + " vortex configurations, " + std::to_string(born_samples) +
                          " samples, tolerance 4x sampling noise" +
                          (b.impossible_sampled ? ", sampled a configuration of zero Born weight" : "")};
        checks.push_back(c);
    }
    auto spec_checks = spectrum_checks();
    checks.insert(checks.end(), spec_checks.begin(), spec_checks.end());
    bool ok = print_checks(std::cout, checks);
    std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
    return ok ? kExitOk : kExitCheck;
}

int cmd_campaign(const CampaignConfig &cfg) {
    CampaignSummary s = run_campaign(cfg);
    std::cout << s.json;
    std::cerr << "wrote " << (cfg.write_samples ? samples_path(cfg) + ", " : "") << summary_path(cfg) << "\n";
    if (!s.checks_passed) {
        for (const auto &f : s.check_failures) {
            std::cerr << "check failed: " << f << "\n";
        }
        return kExitCheck;
    }
    return kExitOk;
}

int cmd_sweep(const CampaignConfig &cfg) {
    auto pts = run_sweep(cfg);
    std::cout << "L_x,L_y,t_over_pi,p_meas,observable,estimate,stderr,n_samples\n";
    for (const auto &p : pts) {
        std::cout << p.L_x << "," << p.L_y << "," << p.t_over_pi << "," << p.p_meas << "," << p.observable << ","
                  << p.estimate.value << "," << p.estimate.error << "," << p.n_samples << "\n";
    }
    std::cerr << "wrote " << sweep_path(cfg) << "\n";
    return kExitOk;
}

int cmd_spectrum(const std::vector<double> &k_grid, const std::string &out) {
    SpectrumTable t = percolation_spectrum(k_grid);
    auto r = percolation_derivatives_richardson();
    json j;
    j["k"] = t.k;
    j["X_k"] = t.x_k;
    json d = json::array();
    for (int m = 0; m < 5; m++) {
        d.push_back({{"quantity", "x^(" + std::to_string(m + 1) + ")"},
                     {"estimate", t.derivative[m]},
                     {"richardson", r[m]}});
    }
    j["derivatives"] = d;
    emit(j.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_collapse(const std::string &sweep_csv, const std::string &axis, double u_guess, double nu_guess, int n_boot,
                 const std::string &out) {
    if (axis != "p_meas" && axis != "t_over_pi") {
        throw ConfigError("axis", "expected p_meas or t_over_pi, got '" + axis + "'");
    }
    auto pts = read_sweep_csv(sweep_csv);
    if (pts.empty()) {
        throw std::runtime_error(sweep_csv + ": no sweep points");
    }
    std::map<int, Curve> by_l;
    for (const auto &p : pts) {
        if (!std::isfinite(p.estimate.value)) {
            continue;
        }
        Curve &c = by_l[p.L_x];
        c.L = p.L_x;
        c.points.push_back({axis == "p_meas" ? p.p_meas : p.t_over_pi, p.estimate.value, p.estimate.error});
    }
    std::vector<Curve> curves;
    for (auto &[L, c] : by_l) {
        std::sort(c.points.begin(), c.points.end(), [](const CurvePoint &a, const CurvePoint &b) { return a.u < b.u; });
        curves.push_back(c);
    }
    CollapseResult r = collapse(curves, u_guess, nu_guess, n_boot);
    json j;
    j["axis"] = axis;
    j["u_c"] = {{"estimate", r.u_c}, {"stderr", r.u_c_stderr}};
    j["nu"] = {{"estimate", r.nu}, {"stderr", r.nu_stderr}};
    j["cost"] = r.cost;
    j["n_boot"] = r.n_boot;
    j["locally_optimal"] = r.locally_optimal;
    json cr = json::array();
    for (const auto &c : r.crossings) {
        cr.push_back({{"L1", c.L1}, {"L2", c.L2}, {"u", c.u}});
    }
    j["crossings"] = cr;
    emit(j.dump(2) + "\n", out);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-induced transitions in Born-sampled random-bond Ising circuits"};
    app.require_subcommand(1);

    auto *selftest = app.add_subcommand("selftest", "Cross-backend, Born-identity and spectrum self-checks");
    int st_programs = 40;
    uint64_t st_born = 100000;
    bool st_inject = false;
    selftest->add_option("--programs", st_programs, "random programs per family")->check(CLI::PositiveNumber);
    selftest->add_option("--born-samples", st_born, "samples per Born check")->check(CLI::PositiveNumber);
    selftest->add_flag("--inject-sign-fault", st_inject, "negative control: corrupt one gate sign");

    auto *sample = app.add_subcommand("sample", "Run an entropy (or free-energy) campaign");
    ConfigFlags sample_flags;
    sample_flags.attach(sample);

    auto *ci = app.add_subcommand("coherent-info", "Run a coherent-information campaign");
    ConfigFlags ci_flags;
    ci_flags.attach(ci);

    auto *sweep = app.add_subcommand("sweep", "Grid over L_x_grid x t_over_pi_grid x p_meas_grid");
    ConfigFlags sweep_flags;
    sweep_flags.attach(sweep);

    auto *fit = app.add_subcommand("fit", "Summarize and fit a samples / coherent / free-energy CSV");
    std::string fit_csv, fit_out;
    ConfigFlags fit_flags;
    fit->add_option("csv", fit_csv, "input CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("-o,--output", fit_out, "summary JSON path (default stdout)");
    fit_flags.attach(fit);

    auto *spectrum = app.add_subcommand("spectrum", "Exact percolation spectrum X_k and x^(m)");
    std::vector<double> k_grid{0, 0.5, 1, 1.5, 2, 3, 4};
    std::string spectrum_out;
    spectrum->add_option("--k", k_grid, "k values")->delimiter(',');
    spectrum->add_option("-o,--output", spectrum_out, "JSON path (default stdout)");

    auto *col = app.add_subcommand("collapse", "Crossings and data collapse of a sweep CSV");
    std::string col_csv, col_axis = "p_meas", col_out;
    double col_u = 0.5, col_nu = 1.33;
    int col_boot = 100;
    col->add_option("csv", col_csv, "sweep CSV")->required()->check(CLI::ExistingFile);
    col->add_option("--axis", col_axis, "p_meas or t_over_pi");
    col->add_option("--u-guess", col_u, "initial critical value");
    col->add_option("--nu-guess", col_nu, "initial nu");
    col->add_option("--boot", col_boot, "bootstrap resamples")->check(CLI::NonNegativeNumber);
    col->add_option("-o,--output", col_out, "JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*selftest) {
            return cmd_selftest(st_programs, st_born, st_inject);
        }
        if (*sample) {
            return cmd_campaign(sample_flags.build(CampaignConfig{}, sample));
        }
        if (*ci) {
            CampaignConfig base;
            base.kind = CampaignKind::CoherentInfo;
            base.boundary = Boundary::Open;
            CampaignConfig cfg = ci_flags.build(base, ci);
            if (cfg.kind != CampaignKind::CoherentInfo) {
                throw ConfigError("kind", "coherent-info subcommand requires kind=coherent-info");
            }
            return cmd_campaign(cfg);
        }
        if (*sweep) {
            return cmd_sweep(sweep_flags.build(CampaignConfig{}, sweep));
        }
        if (*fit) {
            CampaignSummary s = summarize_csv(fit_flags.build(CampaignConfig{}, fit), fit_csv);
            emit(s.json, fit_out);
            return s.checks_passed ? kExitOk : kExitCheck;
        }
        if (*spectrum) {
            return cmd_spectrum(k_grid, spectrum_out);
        }
        if (*col) {
            return cmd_collapse(col_csv, col_axis, col_u, col_nu, col_boot, col_out);
        }
    } catch (const ConfigError &e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
