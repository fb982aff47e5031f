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

#include "mipt/campaign.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "mipt/spectra.h"

namespace mipt {

namespace {

using json = nlohmann::ordered_json;

constexpr int kBlocks = 64;

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!s.empty() && s.back() == sep) {
        out.push_back("");
    }
    return out;
}

std::string fmt_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int64_t parse_i64(const std::string &key, const std::string &v) {
    int64_t out = 0;
    std::string s = trim(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
    return out;
}

int parse_int(const std::string &key, const std::string &v) {
    int64_t x = parse_i64(key, v);
    if (x < -2147483647 || x > 2147483647) {
        throw ConfigError(key, "integer out of range: " + v);
    }
    return (int)x;
}

uint64_t parse_u64(const std::string &key, const std::string &v) {
    uint64_t out = 0;
    std::string s = trim(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

double parse_real(const std::string &key, const std::string &v) {
    std::string s = trim(v);
    if (s == "inf" || s == "Inf" || s == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    char *end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(x)) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    return x;
}

bool parse_flag(const std::string &key, const std::string &v) {
    std::string s = trim(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string &key, const std::string &v, F parse_one) {
    std::vector<T> out;
    if (trim(v).empty()) {
        return out;
    }
    for (const auto &item : split(v, ',')) {
        out.push_back(parse_one(key, item));
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T> &v, std::string (*f)(T)) {
    std::string out;
    for (size_t i = 0; i < v.size(); i++) {
        out += (i ? "," : "") + f(v[i]);
    }
    return out;
}

std::string fmt_int(int v) {
    return std::to_string(v);
}

std::string fmt_bool(bool b) {
    return b ? "true" : "false";
}

void require_one_of(const std::string &key, const std::string &v, std::initializer_list<const char *> allowed) {
    std::string list;
    for (const char *a : allowed) {
        if (v == a) {
            return;
        }
        list += (list.empty() ? "" : "|") + std::string(a);
    }
    throw ConfigError(key, "expected " + list + ", got '" + v + "'");
}

struct KeyHandler {
    std::string key;
    std::function<void(CampaignConfig &, const std::string &)> set;
    std::function<std::string(const CampaignConfig &)> get;
};

const std::vector<KeyHandler> &handlers() {
    static const std::vector<KeyHandler> h = [] {
        std::vector<KeyHandler> v;
        auto add = [&](const char *k, auto set, auto get) { v.push_back({k, set, get}); };
        add(
            "kind", [](CampaignConfig &c, const std::string &s) { c.kind = parse_campaign_kind(trim(s)); },
            [](const CampaignConfig &c) { return to_string(c.kind); });
        add(
            "L_x", [](CampaignConfig &c, const std::string &s) { c.L_x = parse_int("L_x", s); },
            [](const CampaignConfig &c) { return std::to_string(c.L_x); });
        add(
            "L_y", [](CampaignConfig &c, const std::string &s) { c.L_y = parse_int("L_y", s); },
            [](const CampaignConfig &c) { return std::to_string(c.L_y); });
        add(
            "boundary",
            [](CampaignConfig &c, const std::string &s) {
                try {
                    c.boundary = parse_boundary(trim(s));
                } catch (const std::invalid_argument &e) {
                    throw ConfigError("boundary", e.what());
                }
            },
            [](const CampaignConfig &c) { return to_string(c.boundary); });
        add(
            "t_over_pi", [](CampaignConfig &c, const std::string &s) { c.t_over_pi = parse_real("t_over_pi", s); },
            [](const CampaignConfig &c) { return fmt_double(c.t_over_pi); });
        add(
            "p_meas", [](CampaignConfig &c, const std::string &s) { c.p_meas = parse_real("p_meas", s); },
            [](const CampaignConfig &c) { return fmt_double(c.p_meas); });
        add(
            "signs",
            [](CampaignConfig &c, const std::string &s) {
                try {
                    c.signs = parse_sign_model(trim(s));
                } catch (const std::invalid_argument &e) {
                    throw ConfigError("signs", e.what());
                }
            },
            [](const CampaignConfig &c) { return to_string(c.signs); });
        add(
            "backend", [](CampaignConfig &c, const std::string &s) { c.backend = trim(s); },
            [](const CampaignConfig &c) { return c.backend; });
        add(
            "clifford_engine", [](CampaignConfig &c, const std::string &s) { c.clifford_engine = trim(s); },
            [](const CampaignConfig &c) { return c.clifford_engine; });
        add(
            "gaussian_engine", [](CampaignConfig &c, const std::string &s) { c.gaussian_engine = trim(s); },
            [](const CampaignConfig &c) { return c.gaussian_engine; });
        add(
            "samples", [](CampaignConfig &c, const std::string &s) { c.samples = parse_u64("samples", s); },
            [](const CampaignConfig &c) { return std::to_string(c.samples); });
        add(
            "seed", [](CampaignConfig &c, const std::string &s) { c.seed = parse_u64("seed", s); },
            [](const CampaignConfig &c) { return std::to_string(c.seed); });
        add(
            "snapshot_every",
            [](CampaignConfig &c, const std::string &s) { c.snapshot_every = parse_int("snapshot_every", s); },
            [](const CampaignConfig &c) { return std::to_string(c.snapshot_every); });
        add(
            "snapshots_per_sample",
            [](CampaignConfig &c, const std::string &s) {
                c.snapshots_per_sample = parse_int("snapshots_per_sample", s);
            },
            [](const CampaignConfig &c) { return std::to_string(c.snapshots_per_sample); });
        add(
            "measure_rows", [](CampaignConfig &c, const std::string &s) { c.measure_rows = parse_int("measure_rows", s); },
            [](const CampaignConfig &c) { return std::to_string(c.measure_rows); });
        add(
            "cut_stride", [](CampaignConfig &c, const std::string &s) { c.cut_stride = parse_int("cut_stride", s); },
            [](const CampaignConfig &c) { return std::to_string(c.cut_stride); });
        add(
            "fold", [](CampaignConfig &c, const std::string &s) { c.fold = trim(s); },
            [](const CampaignConfig &c) { return c.fold; });
        add(
            "renyi",
            [](CampaignConfig &c, const std::string &s) {
                c.renyi = parse_list<double>("renyi", s, [](const std::string &k, const std::string &x) {
                    try {
                        return parse_renyi(trim(x));
                    } catch (const std::invalid_argument &) {
                        throw ConfigError(k, "bad Renyi index '" + x + "'");
                    }
                });
            },
            [](const CampaignConfig &c) {
                std::string out;
                for (size_t i = 0; i < c.renyi.size(); i++) {
                    out += (i ? "," : "") + renyi_label(c.renyi[i]);
                }
                return out;
            });
        add(
            "max_order", [](CampaignConfig &c, const std::string &s) { c.max_order = parse_int("max_order", s); },
            [](const CampaignConfig &c) { return std::to_string(c.max_order); });
        add(
            "fit_lo", [](CampaignConfig &c, const std::string &s) { c.fit_lo = parse_real("fit_lo", s); },
            [](const CampaignConfig &c) { return fmt_double(c.fit_lo); });
        add(
            "fit_hi", [](CampaignConfig &c, const std::string &s) { c.fit_hi = parse_real("fit_hi", s); },
            [](const CampaignConfig &c) { return fmt_double(c.fit_hi); });
        add(
            "out", [](CampaignConfig &c, const std::string &s) { c.out = trim(s); },
            [](const CampaignConfig &c) { return c.out; });
        add(
            "write_samples",
            [](CampaignConfig &c, const std::string &s) { c.write_samples = parse_flag("write_samples", s); },
            [](const CampaignConfig &c) { return fmt_bool(c.write_samples); });
        add(
            "resume", [](CampaignConfig &c, const std::string &s) { c.resume = parse_flag("resume", s); },
            [](const CampaignConfig &c) { return fmt_bool(c.resume); });
        add(
            "workers", [](CampaignConfig &c, const std::string &s) { c.workers = parse_int("workers", s); },
            [](const CampaignConfig &c) { return std::to_string(c.workers); });
        add(
            "commit_every", [](CampaignConfig &c, const std::string &s) { c.commit_every = parse_int("commit_every", s); },
            [](const CampaignConfig &c) { return std::to_string(c.commit_every); });
        add(
            "mps_cutoff", [](CampaignConfig &c, const std::string &s) { c.mps_cutoff = parse_real("mps_cutoff", s); },
            [](const CampaignConfig &c) { return fmt_double(c.mps_cutoff); });
        add(
            "mps_chi_max", [](CampaignConfig &c, const std::string &s) { c.mps_chi_max = parse_int("mps_chi_max", s); },
            [](const CampaignConfig &c) { return std::to_string(c.mps_chi_max); });
        add(
            "gaussian_orthonormalize_rows",
            [](CampaignConfig &c, const std::string &s) {
                c.gaussian_orthonormalize_rows = parse_int("gaussian_orthonormalize_rows", s);
            },
            [](const CampaignConfig &c) { return std::to_string(c.gaussian_orthonormalize_rows); });
        add(
            "dense_max_qubits",
            [](CampaignConfig &c, const std::string &s) { c.dense_max_qubits = parse_int("dense_max_qubits", s); },
            [](const CampaignConfig &c) { return std::to_string(c.dense_max_qubits); });
        add(
            "t_over_pi_grid",
            [](CampaignConfig &c, const std::string &s) { c.t_over_pi_grid = parse_list<double>("t_over_pi_grid", s, parse_real); },
            [](const CampaignConfig &c) { return join<double>(c.t_over_pi_grid, fmt_double); });
        add(
            "p_meas_grid",
            [](CampaignConfig &c, const std::string &s) { c.p_meas_grid = parse_list<double>("p_meas_grid", s, parse_real); },
            [](const CampaignConfig &c) { return join<double>(c.p_meas_grid, fmt_double); });
        add(
            "L_x_grid",
            [](CampaignConfig &c, const std::string &s) { c.L_x_grid = parse_list<int>("L_x_grid", s, parse_int); },
            [](const CampaignConfig &c) { return join<int>(c.L_x_grid, fmt_int); });
        return v;
    }();
    return h;
}

// Keys that do not change the sampled data.
bool is_operational_key(const std::string &k) {
    return k == "samples" || k == "workers" || k == "resume" || k == "commit_every" || k == "out" ||
           k == "write_samples" || k == "fit_lo" || k == "fit_hi" || k == "t_over_pi_grid" || k == "p_meas_grid" ||
           k == "L_x_grid";
}

std::string identity_text(const CampaignConfig &cfg) {
    std::string out;
    for (const auto &h : handlers()) {
        if (!is_operational_key(h.key)) {
            out += h.key + "=" + h.get(cfg) + "\n";
        }
    }
    return out;
}

void check_t_over_pi(const std::string &key, double v) {
    if (!(v > 0 && v <= 0.25)) {
        throw ConfigError(key, "must lie in (0, 0.25], got " + fmt_double(v));
    }
}

void check_p(const std::string &key, double v) {
    if (!(v >= 0 && v <= 1)) {
        throw ConfigError(key, "must lie in [0, 1], got " + fmt_double(v));
    }
}

bool is_clifford_point(double t_over_pi) {
    return t_over_pi == 0.25;
}

std::string csv_header(CampaignKind k) {
    switch (k) {
        case CampaignKind::Entropy:
            return "seed,sample_index,backend,t,p_meas,L_x,L_y,snapshot_row,n,l,S_nats\n";
        case CampaignKind::CoherentInfo:
            return "seed,sample_index,backend,t,p_meas,L_x,L_y,C,I_s_bits\n";
        case CampaignKind::FreeEnergy:
            return "seed,sample_index,backend,t,p_meas,L_x,L_y,minus_log_Z\n";
    }
    return "";
}

std::string csv_rows(const CampaignConfig &cfg, const ResolvedCampaign &rc, const SampleRecord &rec) {
    std::string prefix = std::to_string(cfg.seed) + "," + std::to_string(rec.index) + "," + to_string(rc.backend) +
                         "," + fmt_double(rc.t) + "," + fmt_double(cfg.p_meas) + "," + std::to_string(rc.spec.L_x) +
                         ",";
    std::string out;
    switch (cfg.kind) {
        case CampaignKind::Entropy:
            for (const auto &snap : rec.snapshots) {
                std::string p2 = prefix + std::to_string(rc.spec.L_y) + "," + std::to_string(snap.snapshot_row) + ",";
                for (size_t c = 0; c < snap.cuts.size(); c++) {
                    for (size_t r = 0; r < snap.renyi.size(); r++) {
                        out += p2 + renyi_label(snap.renyi[r]) + "," + std::to_string(snap.cuts[c]) + "," +
                               fmt_double(snap.s[c][r]) + "\n";
                    }
                }
            }
            break;
        case CampaignKind::CoherentInfo:
            out += prefix + std::to_string(rc.spec.L_y) + "," + fmt_double(rec.domain_wall.c) + "," +
                   fmt_double(rec.domain_wall.i_s_bits) + "\n";
            break;
        case CampaignKind::FreeEnergy:
            out += prefix + std::to_string(rc.measure_rows) + "," + fmt_double(rec.minus_log_z) + "\n";
            break;
    }
    return out;
}

json estimate_json(const Estimate &e) {
    return json{{"estimate", e.value}, {"stderr", e.error}};
}

void write_text_atomic(const std::string &path, const std::string &text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + tmp);
        }
        f << text;
        f.flush();
        if (!f) {
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Farms [start, cfg.samples) into acc; on_commit(rec) runs after each add.
void farm_into(const CampaignConfig &cfg, const ResolvedCampaign &rc, CampaignAccumulators &acc, uint64_t start,
               const std::function<void(const SampleRecord &)> &on_commit) {
    ordered_farm(
        start, cfg.samples, worker_count(cfg), [&](uint64_t i) { return compute_sample(cfg, rc, i); },
        [&](SampleRecord &&rec) {
            acc.add(rec);
            if (on_commit) {
                on_commit(rec);
            }
        });
}

}  // namespace

std::string to_string(CampaignKind k) {
    switch (k) {
        case CampaignKind::Entropy:
            return "entropy";
        case CampaignKind::CoherentInfo:
            return "coherent-info";
        case CampaignKind::FreeEnergy:
            return "free-energy";
    }
    return "?";
}

CampaignKind parse_campaign_kind(const std::string &s) {
    if (s == "entropy") {
        return CampaignKind::Entropy;
    }
    if (s == "coherent-info") {
        return CampaignKind::CoherentInfo;
    }
    if (s == "free-energy") {
        return CampaignKind::FreeEnergy;
    }
    throw ConfigError("kind", "expected entropy|coherent-info|free-energy, got '" + s + "'");
}

void set_key(CampaignConfig &cfg, const std::string &key, const std::string &value) {
    for (const auto &h : handlers()) {
        if (h.key == key) {
            h.set(cfg, value);
            return;
        }
    }
    throw ConfigError(key, "unknown configuration key");
}

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &h : handlers()) {
            k.push_back(h.key);
        }
        return k;
    }();
    return keys;
}

std::string to_key_values(const CampaignConfig &cfg) {
    std::string out;
    for (const auto &h : handlers()) {
        out += h.key + "=" + h.get(cfg) + "\n";
    }
    return out;
}

CampaignConfig parse_key_values(const std::string &text, CampaignConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key=value, got '" + line + "'");
        }
        set_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

void CampaignConfig::validate() const {
    if (L_x < 2) {
        throw ConfigError("L_x", "must be >= 2, got " + std::to_string(L_x));
    }
    if (boundary == Boundary::Periodic && L_x < 3) {
        throw ConfigError("L_x", "a periodic chain needs L_x >= 3");
    }
    if (L_y < 0) {
        throw ConfigError("L_y", "must be >= 0 (0 selects the default), got " + std::to_string(L_y));
    }
    check_t_over_pi("t_over_pi", t_over_pi);
    check_p("p_meas", p_meas);
    require_one_of("backend", backend, {"auto", "exact", "mps", "clifford", "gaussian"});
    require_one_of("clifford_engine", clifford_engine, {"auto", "tableau", "clusters"});
    require_one_of("gaussian_engine", gaussian_engine, {"auto", "covariance", "modes"});
    require_one_of("fold", fold, {"auto", "true", "false"});
    if (kind == CampaignKind::CoherentInfo && boundary != Boundary::Open) {
        throw ConfigError("boundary", "coherent-info campaigns need boundary=open (test spins sit on the edges)");
    }
    if (backend == "clifford" && !is_clifford_point(t_over_pi)) {
        throw ConfigError("backend", "clifford requires t_over_pi = 0.25, got " + fmt_double(t_over_pi));
    }
    if (kind == CampaignKind::FreeEnergy && gaussian_engine == "modes") {
        throw ConfigError("gaussian_engine", "modes does not track log weights; free-energy needs covariance");
    }
    if (snapshot_every < 0) {
        throw ConfigError("snapshot_every", "must be >= 0");
    }
    if (snapshots_per_sample < 1) {
        throw ConfigError("snapshots_per_sample", "must be >= 1");
    }
    if (measure_rows < 0) {
        throw ConfigError("measure_rows", "must be >= 0");
    }
    if (cut_stride < 1) {
        throw ConfigError("cut_stride", "must be >= 1");
    }
    if (renyi.empty()) {
        throw ConfigError("renyi", "needs at least one index");
    }
    for (double n : renyi) {
        if (!(n > 0)) {
            throw ConfigError("renyi", "indices must be positive or inf");
        }
    }
    if (max_order < 1 || max_order > MomentAccumulator::kMaxOrder) {
        throw ConfigError("max_order", "must lie in 1..5");
    }
    if (!(fit_lo >= 0 && fit_lo < fit_hi && fit_hi <= 1)) {
        throw ConfigError(fit_lo >= 0 && fit_lo <= 1 ? "fit_hi" : "fit_lo", "need 0 <= fit_lo < fit_hi <= 1");
    }
    if (out.empty()) {
        throw ConfigError("out", "must not be empty");
    }
    if (workers < 0) {
        throw ConfigError("workers", "must be >= 0");
    }
    if (commit_every < 1) {
        throw ConfigError("commit_every", "must be >= 1");
    }
    if (!(mps_cutoff >= 0)) {
        throw ConfigError("mps_cutoff", "must be >= 0");
    }
    if (mps_chi_max < 1) {
        throw ConfigError("mps_chi_max", "must be >= 1");
    }
    if (gaussian_orthonormalize_rows < 1) {
        throw ConfigError("gaussian_orthonormalize_rows", "must be >= 1");
    }
    if (dense_max_qubits < 1 || dense_max_qubits > 26) {
        throw ConfigError("dense_max_qubits", "must lie in 1..26");
    }
    for (double t : t_over_pi_grid) {
        check_t_over_pi("t_over_pi_grid", t);
        if (backend == "clifford" && !is_clifford_point(t)) {
            throw ConfigError("t_over_pi_grid", "backend clifford requires every t_over_pi = 0.25");
        }
    }
    for (double p : p_meas_grid) {
        check_p("p_meas_grid", p);
    }
    for (int l : L_x_grid) {
        if (l < 2 || (boundary == Boundary::Periodic && l < 3)) {
            throw ConfigError("L_x_grid", "entry " + std::to_string(l) + " is too small");
        }
    }
}

ResolvedCampaign resolve(const CampaignConfig &cfg) {
    cfg.validate();
    ResolvedCampaign rc;
    rc.spec.L_x = cfg.L_x;
    rc.spec.boundary = cfg.boundary;
    rc.spec.protocol = cfg.kind == CampaignKind::CoherentInfo ? Protocol::SurfaceCode : Protocol::Cat;
    if (cfg.L_y > 0) {
        rc.spec.L_y = cfg.L_y;
    } else {
        rc.spec.L_y = cfg.kind == CampaignKind::CoherentInfo ? std::max(1, cfg.L_x - 1) : 4 * cfg.L_x;
    }
    rc.t = cfg.t_over_pi * kPi;
    int n_qubits = cfg.L_x + (rc.spec.has_test_spins() ? 2 : 0);
    if (cfg.backend == "auto") {
        if (is_clifford_point(cfg.t_over_pi)) {
            rc.backend = BackendKind::Clifford;
        } else if (n_qubits <= 12) {
            rc.backend = BackendKind::Exact;
        } else {
            rc.backend = BackendKind::Gaussian;
        }
    } else {
        rc.backend = parse_backend(cfg.backend);
    }
    if (rc.backend == BackendKind::Exact && n_qubits > cfg.dense_max_qubits) {
        throw ConfigError("backend", "exact needs at most dense_max_qubits = " + std::to_string(cfg.dense_max_qubits) +
                                         " qubits, have " + std::to_string(n_qubits));
    }
    rc.options.dense_max_qubits = cfg.dense_max_qubits;
    rc.options.mps_cutoff = cfg.mps_cutoff;
    rc.options.mps_chi_max = cfg.mps_chi_max;
    rc.options.gaussian_orthonormalize_rows = cfg.gaussian_orthonormalize_rows;
    rc.options.clifford_engine = cfg.clifford_engine == "tableau" ? CliffordEngine::Tableau : CliffordEngine::Clusters;
    if (cfg.gaussian_engine == "auto") {
        rc.options.gaussian_engine = cfg.kind != CampaignKind::FreeEnergy && n_qubits >= 32 ? GaussianEngine::Modes
                                                                                          : GaussianEngine::Covariance;
    } else {
        rc.options.gaussian_engine = cfg.gaussian_engine == "modes" ? GaussianEngine::Modes : GaussianEngine::Covariance;
    }
    rc.snapshot_every = cfg.snapshot_every > 0 ? cfg.snapshot_every : std::max(1, cfg.L_x / 2);
    rc.measure_rows = cfg.measure_rows > 0 ? cfg.measure_rows : 4 * cfg.L_x;
    bool fold = cfg.fold == "auto" ? cfg.boundary == Boundary::Periodic : cfg.fold == "true";
    rc.cuts = cut_list(cfg.L_x, cfg.cut_stride, fold);
    rc.geometry = {cfg.L_x, cfg.boundary};
    return rc;
}

int worker_count(const CampaignConfig &cfg) {
    if (cfg.workers > 0) {
        return cfg.workers;
    }
    if (const char *env = std::getenv("MIPT_WORKERS")) {
        try {
            int w = parse_int("MIPT_WORKERS", env);
            if (w >= 1) {
                return w;
            }
        } catch (const ConfigError &) {
        }
        throw ConfigError("MIPT_WORKERS", "must be a positive integer, got '" + std::string(env) + "'");
    }
    return 1;
}

SampleRecord compute_sample(const CampaignConfig &cfg, const ResolvedCampaign &rc, uint64_t i) {
    SampleRecord rec;
    rec.index = i;
    switch (cfg.kind) {
        case CampaignKind::Entropy: {
            RowStream st(rc.spec, rc.t, cfg.p_meas, cfg.signs, cfg.seed, i);
            auto b = make_backend(rc.backend, st.header(), rc.options);
            b->set_log_weight(st.header().init_log_weight);
            int total = rc.spec.L_y + (cfg.snapshots_per_sample - 1) * rc.snapshot_every;
            for (int r = 1; r <= total; r++) {
                b->apply_row(st.next());
                if (r >= rc.spec.L_y && (r - rc.spec.L_y) % rc.snapshot_every == 0) {
                    EntropySample snap = entropy_sample(*b, rc.cuts, cfg.renyi);
                    snap.seed = cfg.seed;
                    snap.sample_index = i;
                    snap.snapshot_row = r;
                    rec.snapshots.push_back(std::move(snap));
                }
            }
            break;
        }
        case CampaignKind::CoherentInfo: {
            DisorderRealization real = sample_realization(rc.spec, rc.t, cfg.p_meas, cfg.seed, i);
            if (cfg.signs == SignModel::Clean) {
                for (auto *signs : {&real.spatial_sign, &real.temporal_sign, &real.test_sign}) {
                    for (auto &s : *signs) {
                        s = s != 0 ? 1 : 0;
                    }
                }
            }
            CircuitProgram prog = compile(rc.spec, rc.t, cfg.p_meas, gauge_fix_temporal(real));
            auto b = run_program(rc.backend, prog, rc.options);
            rec.domain_wall = domain_wall(*b, prog);
            break;
        }
        case CampaignKind::FreeEnergy: {
            RowStream st(rc.spec, rc.t, cfg.p_meas, cfg.signs, cfg.seed, i);
            auto b = make_backend(rc.backend, st.header(), rc.options);
            b->set_log_weight(st.header().init_log_weight);
            for (int r = 0; r < rc.spec.L_y; r++) {
                b->apply_row(st.next());
            }
            double w0 = b->log_weight();
            for (int r = 0; r < rc.measure_rows; r++) {
                b->apply_row(st.next());
            }
            double w1 = b->log_weight();
            if (!std::isfinite(w0) || !std::isfinite(w1)) {
                throw std::runtime_error("free-energy campaign: backend " + to_string(rc.backend) +
                                         " does not track log weights");
            }
            rec.minus_log_z = -(w1 - w0);
            break;
        }
    }
    return rec;
}

CampaignAccumulators::CampaignAccumulators(const CampaignConfig &cfg, const ResolvedCampaign &rc)
    : n_cuts_(rc.cuts.size()), i_s_(kBlocks), c_(kBlocks), f_(kBlocks) {
    if (cfg.kind == CampaignKind::Entropy) {
        entropy_.assign(cfg.renyi.size() * n_cuts_, BlockedMoments(kBlocks));
    }
    measure_sites_ = (double)rc.spec.L_x * rc.measure_rows;
}

void CampaignAccumulators::add(const SampleRecord &rec) {
    samples_++;
    for (const auto &snap : rec.snapshots) {
        snapshots_++;
        if (!snap.renyi_monotone(1e-9)) {
            violations_++;
        }
        size_t nr = snap.renyi.size();
        if (snap.s.size() != n_cuts_ || nr * n_cuts_ != entropy_.size()) {
            throw std::invalid_argument("snapshot shape does not match the campaign cuts / Renyi list");
        }
        for (size_t c = 0; c < n_cuts_; c++) {
            for (size_t r = 0; r < nr; r++) {
                entropy_[r * n_cuts_ + c].add(rec.index, snap.s[c][r]);
            }
        }
    }
    if (entropy_.empty()) {
        i_s_.add(rec.index, rec.domain_wall.i_s_bits);
        c_.add(rec.index, rec.domain_wall.c);
        f_.add(rec.index, rec.minus_log_z / measure_sites_);
    }
}

std::vector<double> CampaignAccumulators::state() const {
    std::vector<double> out{(double)samples_, (double)snapshots_, (double)violations_};
    auto append = [&](const BlockedMoments &b) {
        auto s = b.state();
        out.insert(out.end(), s.begin(), s.end());
    };
    for (const auto &b : entropy_) {
        append(b);
    }
    append(i_s_);
    append(c_);
    append(f_);
    return out;
}

void CampaignAccumulators::load_state(const std::vector<double> &state) {
    const size_t w = (MomentAccumulator::kMaxOrder + 1) * kBlocks;
    if (state.size() != 3 + w * (entropy_.size() + 3)) {
        throw std::invalid_argument("accumulator state has the wrong length");
    }
    samples_ = (uint64_t)state[0];
    snapshots_ = (uint64_t)state[1];
    violations_ = (uint64_t)state[2];
    size_t pos = 3;
    auto take = [&]() {
        std::vector<double> s(state.begin() + pos, state.begin() + pos + w);
        pos += w;
        return BlockedMoments::from_state(s);
    };
    for (auto &b : entropy_) {
        b = take();
    }
    i_s_ = take();
    c_ = take();
    f_ = take();
}

const FitResult &CampaignSummary::fit(const std::string &quantity, double renyi_index) const {
    for (const auto &f : fits) {
        if (f.quantity == quantity && f.renyi == renyi_index) {
            if (!f.error.empty()) {
                throw std::runtime_error(quantity + " fit failed: " + f.error);
            }
            return f.fit;
        }
    }
    throw std::invalid_argument("no fit named " + quantity + " for n = " + renyi_label(renyi_index));
}

CampaignSummary summarize(const CampaignConfig &cfg, const ResolvedCampaign &rc, const CampaignAccumulators &acc) {
    CampaignSummary sum;
    sum.kind = cfg.kind;
    sum.n_samples = acc.samples();
    sum.n_snapshots = acc.snapshots();
    sum.empty = acc.samples() == 0;
    sum.renyi = cfg.renyi;
    sum.cuts = rc.cuts;
    json j;
    j["kind"] = to_string(cfg.kind);
    j["backend"] = to_string(rc.backend);
    j["n_samples"] = sum.n_samples;
    j["seeds"] = json::array({cfg.seed});
    j["empty"] = sum.empty;
    j["lattice"] = {{"L_x", rc.spec.L_x},
                    {"L_y", rc.spec.L_y},
                    {"boundary", to_string(rc.spec.boundary)},
                    {"protocol", to_string(rc.spec.protocol)}};
    j["t"] = rc.t;
    j["t_over_pi"] = cfg.t_over_pi;
    j["p_meas"] = cfg.p_meas;
    j["signs"] = to_string(cfg.signs);

    if (cfg.kind == CampaignKind::Entropy) {
        j["n_snapshots"] = sum.n_snapshots;
        j["snapshot_every"] = rc.snapshot_every;
        json cum = json::array();
        sum.cumulants.assign(cfg.renyi.size(), std::vector<std::vector<Estimate>>(rc.cuts.size()));
        for (size_t r = 0; r < cfg.renyi.size(); r++) {
            for (size_t c = 0; c < rc.cuts.size(); c++) {
                const BlockedMoments &b = acc.entropy(r, c);
                int order = (int)std::min<uint64_t>(cfg.max_order, b.count());
                if (order < 1) {
                    continue;
                }
                auto k = b.cumulants(order);
                sum.cumulants[r][c] = k;
                json kj = json::array();
                for (int m = 0; m < order; m++) {
                    kj.push_back({{"order", m + 1}, {"estimate", k[m].value}, {"stderr", k[m].error}});
                }
                if (order >= 2 && k[1].value < 0) {
                    sum.check_failures.push_back("negative kappa_2 at n = " + renyi_label(cfg.renyi[r]) +
                                                 ", l = " + std::to_string(rc.cuts[c]));
                }
                cum.push_back({{"n", renyi_label(cfg.renyi[r])},
                               {"l", rc.cuts[c]},
                               {"R", chord(rc.cuts[c], rc.geometry)},
                               {"kappa", kj}});
            }
        }
        j["cumulants"] = cum;
        if (acc.monotonicity_violations() > 0) {
            sum.check_failures.push_back(std::to_string(acc.monotonicity_violations()) +
                                         " snapshots violate Renyi monotonicity");
        }
        // Fits: c_ent for every Renyi index, x^(m) for the von Neumann entropy.
        json fits = json::array();
        for (size_t r = 0; r < cfg.renyi.size() && !sum.empty; r++) {
            int max_m = cfg.renyi[r] == 1 ? cfg.max_order : 1;
            for (int m = 1; m <= max_m; m++) {
                CutSeries series;
                for (size_t c = 0; c < rc.cuts.size(); c++) {
                    if ((int)sum.cumulants[r][c].size() >= m) {
                        series.l.push_back(rc.cuts[c]);
                        series.value.push_back(sum.cumulants[r][c][m - 1].value);
                        series.error.push_back(sum.cumulants[r][c][m - 1].error);
                    }
                }
                std::vector<NamedFit> named;
                try {
                    FitResult f = fit_log_slope(series, rc.geometry, m, cfg.fit_lo, cfg.fit_hi);
                    if (m == 1) {
                        named.push_back({"c_ent", cfg.renyi[r], 1, f, ""});
                        if (cfg.renyi[r] == 1) {
                            FitResult x = f;
                            x.derived_name = "x^(1)";
                            x.derived = exponent_from_slope(f.slope, 1, rc.geometry.boundary);
                            x.derived_stderr = std::abs(exponent_from_slope(f.slope_stderr, 1, rc.geometry.boundary));
                            named.push_back({"x^(1)", 1, 1, x, ""});
                        }
                    } else {
                        named.push_back({f.derived_name, cfg.renyi[r], m, f, ""});
                    }
                } catch (const std::invalid_argument &e) {
                    named.push_back({m == 1 ? "c_ent" : "x^(" + std::to_string(m) + ")", cfg.renyi[r], m, {}, e.what()});
                }
                for (auto &nf : named) {
                    json fj{{"quantity", nf.quantity}, {"n", renyi_label(nf.renyi)}, {"order", nf.order}};
                    if (nf.error.empty()) {
                        fj["estimate"] = nf.fit.derived;
                        fj["stderr"] = nf.fit.derived_stderr;
                        fj["window"] = {nf.fit.window_lo, nf.fit.window_hi};
                        fj["n_points"] = nf.fit.n_points;
                        fj["slope"] = nf.fit.slope;
                        fj["slope_stderr"] = nf.fit.slope_stderr;
                        fj["intercept"] = nf.fit.intercept;
                        fj["chi2_dof"] = nf.fit.chi2_dof;
                    } else {
                        fj["error"] = nf.error;
                    }
                    fj["n_samples"] = sum.n_samples;
                    fj["seeds"] = json::array({cfg.seed});
                    fj["backend"] = to_string(rc.backend);
                    fits.push_back(fj);
                    sum.fits.push_back(std::move(nf));
                }
            }
        }
        j["fits"] = fits;
    } else if (!sum.empty) {
        auto one = [&](const BlockedMoments &b) {
            auto k = b.cumulants(1);
            return k[0];
        };
        if (cfg.kind == CampaignKind::CoherentInfo) {
            sum.mean_i_s = one(acc.i_s());
            sum.mean_c = one(acc.correlator());
            json a = estimate_json(sum.mean_i_s);
            a["n_samples"] = sum.n_samples;
            a["seeds"] = json::array({cfg.seed});
            a["backend"] = to_string(rc.backend);
            j["I_s_bits"] = a;
            j["C"] = estimate_json(sum.mean_c);
        } else {
            sum.free_energy_density = one(acc.free_energy_density());
            json a = estimate_json(sum.free_energy_density);
            a["n_samples"] = sum.n_samples;
            a["seeds"] = json::array({cfg.seed});
            a["backend"] = to_string(rc.backend);
            a["measure_rows"] = rc.measure_rows;
            j["free_energy_density"] = a;
        }
    }
    sum.checks_passed = sum.check_failures.empty();
    j["checks"] = {{"passed", sum.checks_passed}, {"failures", sum.check_failures}};
    sum.json = j.dump(2) + "\n";
    return sum;
}

std::string samples_path(const CampaignConfig &cfg) {
    switch (cfg.kind) {
        case CampaignKind::Entropy:
            return cfg.out + ".samples.csv";
        case CampaignKind::CoherentInfo:
            return cfg.out + ".coherent.csv";
        case CampaignKind::FreeEnergy:
            return cfg.out + ".free_energy.csv";
    }
    return cfg.out + ".csv";
}

std::string summary_path(const CampaignConfig &cfg) {
    return cfg.out + ".summary.json";
}

std::string progress_path(const CampaignConfig &cfg) {
    return cfg.out + ".progress.json";
}

std::string sweep_path(const CampaignConfig &cfg) {
    return cfg.out + ".sweep.csv";
}

CampaignSummary run_campaign(const CampaignConfig &cfg) {
    ResolvedCampaign rc = resolve(cfg);
    CampaignAccumulators acc(cfg, rc);
    const std::string csv = samples_path(cfg), prog_file = progress_path(cfg);
    std::string identity = identity_text(cfg);
    uint64_t start = 0;
    uint64_t csv_bytes = 0;

    if (cfg.resume && std::filesystem::exists(prog_file)) {
        json p = json::parse(read_text(prog_file));
        if (p.at("identity").get<std::string>() != identity) {
            throw ConfigError("resume", "existing " + prog_file +
                                            " was written by a different configuration; remove it or set resume=false");
        }
        start = p.at("next_index").get<uint64_t>();
        csv_bytes = p.at("csv_bytes").get<uint64_t>();
        acc.load_state(p.at("accumulators").get<std::vector<double>>());
        if (cfg.write_samples) {
            if (!std::filesystem::exists(csv) || std::filesystem::file_size(csv) < csv_bytes) {
                throw std::runtime_error("resume: " + csv + " is shorter than its progress record");
            }
            std::filesystem::resize_file(csv, csv_bytes);
        }
    } else if (cfg.write_samples) {
        std::ofstream f(csv, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + csv);
        }
        f << csv_header(cfg.kind);
        csv_bytes = csv_header(cfg.kind).size();
    }

    std::ofstream out;
    if (cfg.write_samples) {
        out.open(csv, std::ios::binary | std::ios::app);
        if (!out) {
            throw std::runtime_error("cannot append to " + csv);
        }
    }
    std::string pending;
    uint64_t next_index = start;
    auto commit_progress = [&]() {
        if (cfg.write_samples) {
            out << pending;
            out.flush();
            if (!out) {
                throw std::runtime_error("write failed: " + csv);
            }
            csv_bytes += pending.size();
        }
        pending.clear();
        json p;
        p["identity"] = identity;
        p["next_index"] = next_index;
        p["csv_bytes"] = csv_bytes;
        p["accumulators"] = acc.state();
        write_text_atomic(prog_file, p.dump());
    };
    farm_into(cfg, rc, acc, start, [&](const SampleRecord &rec) {
        if (cfg.write_samples) {
            pending += csv_rows(cfg, rc, rec);
        }
        next_index = rec.index + 1;
        if (next_index % cfg.commit_every == 0) {
            commit_progress();
        }
    });
    commit_progress();
    CampaignSummary sum = summarize(cfg, rc, acc);
    write_text_atomic(summary_path(cfg), sum.json);
    return sum;
}

CampaignSummary summarize_csv(const CampaignConfig &base, const std::string &csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw std::runtime_error("cannot read " + csv_path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument(csv_path + ": empty file");
    }
    std::vector<std::string> cols = split(trim(line), ',');
    auto col = [&](const std::string &name) {
        auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end()) {
            throw std::invalid_argument(csv_path + ": missing column '" + name + "'");
        }
        return (size_t)(it - cols.begin());
    };
    CampaignConfig cfg = base;
    if (std::find(cols.begin(), cols.end(), "S_nats") != cols.end()) {
        cfg.kind = CampaignKind::Entropy;
    } else if (std::find(cols.begin(), cols.end(), "I_s_bits") != cols.end()) {
        cfg.kind = CampaignKind::CoherentInfo;
        cfg.boundary = Boundary::Open;
    } else if (std::find(cols.begin(), cols.end(), "minus_log_Z") != cols.end()) {
        cfg.kind = CampaignKind::FreeEnergy;
    } else {
        throw std::invalid_argument(csv_path + ": not a samples, coherent or free-energy CSV");
    }
    size_t c_seed = col("seed"), c_idx = col("sample_index"), c_t = col("t"), c_p = col("p_meas"), c_lx = col("L_x"),
           c_ly = col("L_y");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        auto f = split(trim(line), ',');
        if (f.size() != cols.size()) {
            throw std::invalid_argument(csv_path + ": row with " + std::to_string(f.size()) + " fields, expected " +
                                        std::to_string(cols.size()));
        }
        rows.push_back(std::move(f));
    }
    if (!rows.empty()) {
        cfg.seed = parse_u64("seed", rows[0][c_seed]);
        cfg.t_over_pi = parse_real("t", rows[0][c_t]) / kPi;
        cfg.t_over_pi = std::min(cfg.t_over_pi, 0.25);
        cfg.p_meas = parse_real("p_meas", rows[0][c_p]);
        cfg.L_x = parse_int("L_x", rows[0][c_lx]);
        if (cfg.kind == CampaignKind::FreeEnergy) {
            cfg.measure_rows = parse_int("L_y", rows[0][c_ly]);
        } else {
            cfg.L_y = parse_int("L_y", rows[0][c_ly]);
        }
    }
    if (cfg.kind == CampaignKind::Entropy && !rows.empty()) {
        // Renyi indices and cuts from the first snapshot.
        size_t c_n = col("n"), c_l = col("l"), c_row = col("snapshot_row");
        std::vector<double> renyi;
        std::vector<int> cuts;
        for (const auto &r : rows) {
            if (r[c_idx] != rows[0][c_idx] || r[c_row] != rows[0][c_row]) {
                break;
            }
            double n = parse_renyi(r[c_n]);
            int l = parse_int("l", r[c_l]);
            if (std::find(renyi.begin(), renyi.end(), n) == renyi.end()) {
                renyi.push_back(n);
            }
            if (std::find(cuts.begin(), cuts.end(), l) == cuts.end()) {
                cuts.push_back(l);
            }
        }
        cfg.renyi = renyi;
        ResolvedCampaign rc = resolve(cfg);
        rc.cuts = cuts;
        CampaignAccumulators acc(cfg, rc);
        size_t per_snap = renyi.size() * cuts.size();
        if (rows.size() % per_snap != 0) {
            throw std::invalid_argument(csv_path + ": incomplete snapshot at end of file");
        }
        SampleRecord rec;
        bool open = false;
        for (size_t k = 0; k < rows.size(); k += per_snap) {
            uint64_t idx = parse_u64("sample_index", rows[k][c_idx]);
            if (open && idx != rec.index) {
                acc.add(rec);
                rec = SampleRecord{};
            }
            open = true;
            rec.index = idx;
            EntropySample snap;
            snap.seed = cfg.seed;
            snap.sample_index = idx;
            snap.snapshot_row = parse_int("snapshot_row", rows[k][c_row]);
            snap.cuts = cuts;
            snap.renyi = renyi;
            snap.s.assign(cuts.size(), std::vector<double>(renyi.size()));
            for (size_t q = 0; q < per_snap; q++) {
                const auto &r = rows[k + q];
                size_t ri = std::find(renyi.begin(), renyi.end(), parse_renyi(r[c_n])) - renyi.begin();
                size_t ci = std::find(cuts.begin(), cuts.end(), parse_int("l", r[c_l])) - cuts.begin();
                if (ri >= renyi.size() || ci >= cuts.size()) {
                    throw std::invalid_argument(csv_path + ": snapshot with an unexpected (n, l)");
                }
                snap.s[ci][ri] = parse_real("S_nats", r[col("S_nats")]);
            }
            rec.snapshots.push_back(std::move(snap));
        }
        if (open) {
            acc.add(rec);
        }
        return summarize(cfg, rc, acc);
    }
    ResolvedCampaign rc = resolve(cfg);
    CampaignAccumulators acc(cfg, rc);
    for (const auto &r : rows) {
        SampleRecord rec;
        rec.index = parse_u64("sample_index", r[c_idx]);
        if (cfg.kind == CampaignKind::CoherentInfo) {
            rec.domain_wall.c = parse_real("C", r[col("C")]);
            rec.domain_wall.i_s_bits = parse_real("I_s_bits", r[col("I_s_bits")]);
        } else {
            rec.minus_log_z = parse_real("minus_log_Z", r[col("minus_log_Z")]);
        }
        acc.add(rec);
    }
    return summarize(cfg, rc, acc);
}

namespace {

const char *kSweepHeader = "L_x,L_y,t_over_pi,p_meas,observable,estimate,stderr,n_samples\n";

bool same_point(const SweepPoint &a, int L_x, double t, double p) {
    return a.L_x == L_x && std::abs(a.t_over_pi - t) < 1e-12 && std::abs(a.p_meas - p) < 1e-12;
}

}  // namespace

std::vector<SweepPoint> read_sweep_csv(const std::string &path) {
    std::vector<SweepPoint> out;
    std::ifstream in(path);
    if (!in) {
        return out;
    }
    std::string line;
    if (!std::getline(in, line)) {
        return out;
    }
    if (line + "\n" != kSweepHeader) {
        throw std::invalid_argument(path + ": unexpected sweep header '" + line + "'");
    }
    while (std::getline(in, line)) {
        auto f = split(trim(line), ',');
        if (f.size() != 8) {
            // A torn final line from an interrupted run is dropped.
            continue;
        }
        SweepPoint p;
        p.L_x = parse_int("L_x", f[0]);
        p.L_y = parse_int("L_y", f[1]);
        p.t_over_pi = parse_real("t_over_pi", f[2]);
        p.p_meas = parse_real("p_meas", f[3]);
        p.observable = f[4];
        p.estimate.value = f[5] == "nan" ? std::nan("") : parse_real("estimate", f[5]);
        p.estimate.error = f[6] == "nan" ? std::nan("") : parse_real("stderr", f[6]);
        p.n_samples = parse_u64("n_samples", f[7]);
        out.push_back(p);
    }
    return out;
}

std::vector<SweepPoint> run_sweep(const CampaignConfig &cfg) {
    cfg.validate();
    std::vector<int> Ls = cfg.L_x_grid.empty() ? std::vector<int>{cfg.L_x} : cfg.L_x_grid;
    std::vector<double> ts = cfg.t_over_pi_grid.empty() ? std::vector<double>{cfg.t_over_pi} : cfg.t_over_pi_grid;
    std::vector<double> ps = cfg.p_meas_grid.empty() ? std::vector<double>{cfg.p_meas} : cfg.p_meas_grid;
    const std::string path = sweep_path(cfg);
    std::vector<SweepPoint> done;
    if (cfg.resume && std::filesystem::exists(path)) {
        done = read_sweep_csv(path);
        // Rewrite without a possibly torn last line.
        std::string text = kSweepHeader;
        for (const auto &p : done) {
            text += std::to_string(p.L_x) + "," + std::to_string(p.L_y) + "," + fmt_double(p.t_over_pi) + "," +
                    fmt_double(p.p_meas) + "," + p.observable + "," + fmt_double(p.estimate.value) + "," +
                    fmt_double(p.estimate.error) + "," + std::to_string(p.n_samples) + "\n";
        }
        write_text_atomic(path, text);
    } else {
        write_text_atomic(path, kSweepHeader);
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw std::runtime_error("cannot append to " + path);
    }
    std::vector<SweepPoint> result;
    for (int L : Ls) {
        for (double t : ts) {
            for (double p : ps) {
                auto it = std::find_if(done.begin(), done.end(), [&](const SweepPoint &d) { return same_point(d, L, t, p); });
                if (it != done.end()) {
                    result.push_back(*it);
                    continue;
                }
                CampaignConfig pc = cfg;
                pc.L_x = L;
                pc.t_over_pi = t;
                pc.p_meas = p;
                pc.t_over_pi_grid.clear();
                pc.p_meas_grid.clear();
                pc.L_x_grid.clear();
                if (pc.backend == "clifford" && !is_clifford_point(t)) {
                    throw ConfigError("backend", "clifford requires t_over_pi = 0.25");
                }
                ResolvedCampaign rc = resolve(pc);
                if (pc.kind == CampaignKind::Entropy) {
                    pc.renyi = {1};
                    pc.max_order = 1;
                }
                CampaignAccumulators acc(pc, rc);
                farm_into(pc, rc, acc, 0, nullptr);
                CampaignSummary sum = summarize(pc, rc, acc);
                SweepPoint sp;
                sp.L_x = L;
                sp.L_y = rc.spec.L_y;
                sp.t_over_pi = t;
                sp.p_meas = p;
                sp.n_samples = sum.n_samples;
                sp.estimate = {std::nan(""), std::nan("")};
                switch (pc.kind) {
                    case CampaignKind::CoherentInfo:
                        sp.observable = "I_s_bits";
                        if (!sum.empty) {
                            sp.estimate = sum.mean_i_s;
                        }
                        break;
                    case CampaignKind::FreeEnergy:
                        sp.observable = "free_energy_density";
                        if (!sum.empty) {
                            sp.estimate = sum.free_energy_density;
                        }
                        break;
                    case CampaignKind::Entropy: {
                        sp.observable = "S_1_half";
                        size_t c = std::find(rc.cuts.begin(), rc.cuts.end(), L / 2) - rc.cuts.begin();
                        if (!sum.empty && c < rc.cuts.size() && !sum.cumulants[0][c].empty()) {
                            sp.estimate = sum.cumulants[0][c][0];
                        }
                        break;
                    }
                }
                out << sp.L_x << "," << sp.L_y << "," << fmt_double(t) << "," << fmt_double(p) << "," << sp.observable
                    << "," << fmt_double(sp.estimate.value) << "," << fmt_double(sp.estimate.error) << ","
                    << sp.n_samples << "\n";
                out.flush();
                result.push_back(sp);
            }
        }
    }
    return result;
}

void ordered_farm(uint64_t begin, uint64_t end, int workers, const std::function<SampleRecord(uint64_t)> &work,
                  const std::function<void(SampleRecord &&)> &commit) {
    if (begin >= end) {
        return;
    }
    if (workers <= 1) {
        for (uint64_t i = begin; i < end; i++) {
            commit(work(i));
        }
        return;
    }
    std::mutex mu;
    std::condition_variable ready_cv, space_cv;
    std::map<uint64_t, SampleRecord> ready;
    uint64_t next = begin, committed = begin;
    const uint64_t window = 4 * (uint64_t)workers + 4;
    std::exception_ptr error;
    bool stop = false;
    auto fail = [&](std::exception_ptr e) {
        std::lock_guard<std::mutex> lk(mu);
        if (!error) {
            error = e;
        }
        stop = true;
    };
    auto worker = [&] {
        while (true) {
            uint64_t i;
            {
                std::unique_lock<std::mutex> lk(mu);
                space_cv.wait(lk, [&] { return stop || next >= end || next < committed + window; });
                if (stop || next >= end) {
                    return;
                }
                i = next++;
            }
            try {
                SampleRecord r = work(i);
                std::lock_guard<std::mutex> lk(mu);
                ready.emplace(i, std::move(r));
            } catch (...) {
                fail(std::current_exception());
                ready_cv.notify_all();
                space_cv.notify_all();
                return;
            }
            ready_cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back(worker);
    }
    while (true) {
        SampleRecord r;
        {
            std::unique_lock<std::mutex> lk(mu);
            if (committed >= end) {
                break;
            }
            ready_cv.wait(lk, [&] { return stop || ready.count(committed) > 0; });
            if (stop) {
                break;
            }
            auto it = ready.find(committed);
            r = std::move(it->second);
            ready.erase(it);
        }
        try {
            commit(std::move(r));
        } catch (...) {
            fail(std::current_exception());
            break;
        }
        {
            std::lock_guard<std::mutex> lk(mu);
            committed++;
        }
        space_cv.notify_all();
    }
    {
        std::lock_guard<std::mutex> lk(mu);
        stop = true;
    }
    space_cv.notify_all();
    ready_cv.notify_all();
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace mipt
