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

#include "mipt/selftest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "mipt/backend.h"
#include "mipt/backend_exact.h"
#include "mipt/spectra.h"
#include "mipt/stats.h"

namespace mipt {

namespace {

double max_abs_diff(const std::vector<std::vector<double>> &a, const std::vector<std::vector<double>> &b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < a[i].size(); j++) {
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
        }
    }
    return m;
}

double log_z(const Backend &b) {
    return b.log_weight() + b.log_overlap_plus();
}

double rel_diff(double ref, double x) {
    if (std::isinf(ref) && std::isinf(x) && (ref < 0) == (x < 0)) {
        return 0;
    }
    return std::abs(ref - x) / std::max(1.0, std::abs(ref));
}

CheckResult check(const std::string &name, double value, double tol, const std::string &detail = "") {
    return {name, value, tol, value < tol, detail};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

bool print_checks(std::ostream &out, const std::vector<CheckResult> &checks) {
    bool all = true;
    for (const auto &c : checks) {
        all = all && c.passed;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << fmt(c.value) << " < " << fmt(c.tolerance);
        if (!c.detail.empty()) {
            out << "  (" << c.detail << ")";
        }
        out << "\n";
    }
    return all;
}

CircuitProgram random_program(uint64_t seed, uint64_t i, int max_qubits, double t_fixed) {
    if (max_qubits < 3) {
        throw std::invalid_argument("random_program: max_qubits must be >= 3");
    }
    Rng rng(seed, i, Purpose::Program);
    LatticeSpec s;
    s.protocol = max_qubits >= 4 && rng.bernoulli(0.3) ? Protocol::SurfaceCode : Protocol::Cat;
    s.boundary = s.protocol == Protocol::Cat && rng.bernoulli(0.5) ? Boundary::Periodic : Boundary::Open;
    int max_lx = max_qubits - (s.has_test_spins() ? 2 : 0);
    s.L_x = 2 + (int)rng.below(max_lx - 1);
    if (s.periodic() && s.L_x < 3) {
        s.L_x = 3;
    }
    s.L_y = 1 + (int)rng.below(6);
    double t = t_fixed >= 0 ? t_fixed : 0.01 + rng.uniform() * (kPi / 4 - 0.01);
    double p = 0.3 + 0.7 * rng.uniform();
    return compile(s, t, p, gauge_fix_temporal(sample_realization(s, t, p, seed, i)));
}

CrossBackendReport cross_backend(int n_programs, int max_qubits, uint64_t seed, double mps_cutoff) {
    CrossBackendReport r;
    BackendOptions opt;
    opt.mps_cutoff = mps_cutoff;
    opt.dense_max_qubits = std::max(opt.dense_max_qubits, max_qubits);
    BackendOptions modes = opt;
    modes.gaussian_engine = GaussianEngine::Modes;
    const auto &renyi = default_renyi();
    for (int i = 0; i < n_programs; i++) {
        CircuitProgram prog = random_program(seed, i, max_qubits);
        auto dense = run_program(BackendKind::Exact, prog, opt);
        auto ref = dense->entropy_profile(renyi);
        auto mps = run_program(BackendKind::Mps, prog, opt);
        auto gauss = run_program(BackendKind::Gaussian, prog, opt);
        auto mod = run_program(BackendKind::Gaussian, prog, modes);
        r.mps_entropy = std::max(r.mps_entropy, max_abs_diff(ref, mps->entropy_profile(renyi)));
        r.gaussian_entropy = std::max(r.gaussian_entropy, max_abs_diff(ref, gauss->entropy_profile(renyi)));
        r.modes_entropy = std::max(r.modes_entropy, max_abs_diff(ref, mod->entropy_profile(renyi)));
        r.mps_log_z = std::max(r.mps_log_z, rel_diff(log_z(*dense), log_z(*mps)));
        r.gaussian_log_z = std::max(r.gaussian_log_z, rel_diff(log_z(*dense), log_z(*gauss)));
        r.programs++;
    }
    for (int i = 0; i < n_programs; i++) {
        CircuitProgram prog = random_program(seed + 1, i, max_qubits, kPi / 4);
        auto dense = run_program(BackendKind::Exact, prog, opt);
        auto ref = dense->entropy_profile(renyi);
        for (CliffordEngine e : {CliffordEngine::Tableau, CliffordEngine::Clusters}) {
            BackendOptions o = opt;
            o.clifford_engine = e;
            auto cl = run_program(BackendKind::Clifford, prog, o);
            auto s = cl->entropy_profile(renyi);
            r.clifford_entropy = std::max(r.clifford_entropy, max_abs_diff(ref, s));
            r.clifford_log_z = std::max(r.clifford_log_z, rel_diff(log_z(*dense), log_z(*cl)));
            for (const auto &row : s) {
                for (double v : row) {
                    r.clifford_integrality = std::max(r.clifford_integrality, std::abs(v / kLn2 - std::round(v / kLn2)));
                }
                r.clifford_flatness = std::max(r.clifford_flatness, std::abs(row[0] - row[1]));
            }
        }
        r.clifford_programs++;
    }
    return r;
}

std::vector<CheckResult> cross_backend_checks(const CrossBackendReport &r) {
    std::string n = std::to_string(r.programs) + " programs";
    std::string nc = std::to_string(r.clifford_programs) + " programs at t = pi/4";
    return {
        check("dense vs mps entropies", r.mps_entropy, 1e-8, n),
        check("dense vs mps ln Z (relative)", r.mps_log_z, 1e-9, n),
        check("dense vs gaussian entropies", r.gaussian_entropy, 1e-9, n),
        check("dense vs gaussian ln Z (relative)", r.gaussian_log_z, 1e-9, n),
        check("dense vs gaussian modes entropies", r.modes_entropy, 1e-9, n),
        check("dense vs clifford entropies", r.clifford_entropy, 1e-10, nc),
        check("dense vs clifford ln Z (relative)", r.clifford_log_z, 1e-10, nc),
        check("clifford entropies are integer multiples of ln 2", r.clifford_integrality, 1e-12, nc),
        check("clifford spectra are flat |S_1 - S_2|", r.clifford_flatness, 1e-12, nc),
    };
}

BornReport born_check(const LatticeSpec &spec, double t, double p_meas, uint64_t n_samples, uint64_t seed,
                      const std::function<void(CircuitProgram &)> &mutate) {
    auto dist = born_enumerate(spec, t, p_meas, 20, mutate);
    std::map<std::string, uint64_t> counts;
    for (uint64_t i = 0; i < n_samples; i++) {
        counts[vortices(sample_realization(spec, t, p_meas, seed, i)).key()]++;
    }
    BornReport r;
    r.configs = dist.size();
    for (const auto &[k, p] : dist) {
        auto it = counts.find(k);
        double q = it == counts.end() ? 0 : (double)it->second / n_samples;
        r.tv += std::abs(p - q);
        r.noise += std::sqrt(p / (2 * kPi * n_samples));
    }
    for (const auto &[k, c] : counts) {
        if (!dist.count(k)) {
            r.impossible_sampled = true;
            r.tv += (double)c / n_samples;
        }
    }
    r.tv /= 2;
    return r;
}

void flip_first_zz_sign(CircuitProgram &prog) {
    for (auto &row : prog.rows) {
        for (auto &g : row.zz) {
            if (g.is_zz()) {
                g.sign = (int8_t)-g.sign;
                return;
            }
        }
    }
}

std::vector<CheckResult> spectrum_checks() {
    // References from an independent 40-digit evaluation of X_k.
    const double ref[5] = {0.0955380173557, -0.0229136616097, 0.00349218288166, 0.000232505094723,
                           -0.000256093219824};
    auto table = percolation_spectrum({0.0});
    auto richardson = percolation_derivatives_richardson();
    std::vector<CheckResult> out;
    out.push_back(check("X_0", std::abs(table.x_k[0]), 1e-14));
    for (int m = 0; m < 5; m++) {
        std::string name = "x^(" + std::to_string(m + 1) + ")";
        out.push_back(check(name + " contour vs reference", std::abs(table.derivative[m] - ref[m]), 1e-6,
                            "value " + std::to_string(table.derivative[m])));
        out.push_back(check(name + " contour vs Richardson", std::abs(table.derivative[m] - richardson[m]), 1e-7));
    }
    return out;
}

}  // namespace mipt
