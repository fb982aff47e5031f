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

#include "mipt/circuit.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace mipt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(2 sinh 2b) without overflow for large b.
double log_two_sinh_2b(double b) {
    return 2 * b + std::log1p(-std::exp(-4 * b));
}

// Half of a measured temporal bond: e^{b} I + e^{-b} X = sqrt(2 sinh 2b) e^{b' X}.
void push_measured_half(std::vector<Gate> &out, const DualCouplings &c, int q) {
    if (c.beta_prime == 0) {
        return;
    }
    if (std::isinf(c.beta_prime)) {
        out.push_back({GateKind::ProjXPlus, q, q, 1, kInf, 0.5 * kLn2});
        return;
    }
    out.push_back({GateKind::WeakX, q, q, 1, c.beta_prime / 2, 0.25 * log_two_sinh_2b(c.beta)});
}

// Half of an unmeasured temporal bond: the all-ones factor is 2|+><+|.
void push_unmeasured_half(std::vector<Gate> &out, int q) {
    out.push_back({GateKind::ProjXPlus, q, q, 1, kInf, 0.5 * kLn2});
}

// Half of the uniform boundary factor, normalized to act as 1 on |+>.
void push_cap_half(std::vector<Gate> &out, const DualCouplings &c, int q) {
    if (c.beta_prime == 0) {
        return;
    }
    if (std::isinf(c.beta_prime)) {
        out.push_back({GateKind::ProjXPlus, q, q, 1, kInf, 0});
        return;
    }
    out.push_back({GateKind::WeakX, q, q, 1, c.beta_prime / 2, -c.beta_prime / 2});
}

void temporal_layer(const CircuitProgram &h, const DisorderRealization &real, int layer, std::vector<Gate> &out) {
    const LatticeSpec &s = h.spec;
    for (int x = 0; x < s.L_x; x++) {
        int q = h.lattice_offset + x;
        if (layer < 0 || layer >= s.temporal_layers()) {
            push_cap_half(out, h.couplings, q);
            continue;
        }
        size_t k = (size_t)layer * s.L_x + x;
        if (real.mask.temporal[k]) {
            if (real.temporal_sign[k] != 1) {
                throw std::invalid_argument("realization is not temporal-gauge-fixed (layer " +
                                            std::to_string(layer) + ", x " + std::to_string(x) + ")");
            }
            push_measured_half(out, h.couplings, q);
        } else {
            push_unmeasured_half(out, q);
        }
    }
}

void push_zz(std::vector<Gate> &out, GateKind kind, const DualCouplings &c, int a, int b, int8_t sign) {
    if (c.beta == 0) {
        return;
    }
    out.push_back({kind, a, b, sign, c.beta, 0});
}

void test_spin_gates(const CircuitProgram &h, const DisorderRealization &real, int y, std::vector<Gate> &out) {
    const LatticeSpec &s = h.spec;
    for (int side = 0; side < 2; side++) {
        size_t k = (size_t)y * 2 + side;
        if (!real.mask.test[k]) {
            continue;
        }
        if (side == 0) {
            push_zz(out, GateKind::TestSpinZZ, h.couplings, 0, 1, real.test_sign[k]);
        } else {
            push_zz(out, GateKind::TestSpinZZ, h.couplings, s.L_x, s.L_x + 1, real.test_sign[k]);
        }
    }
}

void check_matches(const CircuitProgram &h, const DisorderRealization &real) {
    real.validate();
    if (!(real.spec == h.spec)) {
        throw std::invalid_argument("realization lattice does not match program lattice");
    }
}

}  // namespace

std::string to_string(GateKind k) {
    switch (k) {
        case GateKind::WeakZZ:
            return "WeakZZ";
        case GateKind::WeakX:
            return "WeakX";
        case GateKind::ProjXPlus:
            return "ProjXPlus";
        case GateKind::TestSpinZZ:
            return "TestSpinZZ";
    }
    return "?";
}

size_t CircuitProgram::gate_count() const {
    size_t n = 0;
    for (const auto &r : rows) {
        n += r.size();
    }
    return n;
}

CircuitProgram program_header(const LatticeSpec &spec, double t, double p_meas) {
    spec.validate();
    if (!(p_meas >= 0 && p_meas <= 1)) {
        throw std::invalid_argument("p_meas must lie in [0, 1]");
    }
    CircuitProgram h;
    h.spec = spec;
    h.t = t;
    h.p_meas = p_meas;
    h.couplings = couplings_from_t(t);
    h.test_spins = spec.has_test_spins();
    h.periodic = spec.periodic();
    h.lattice_offset = h.test_spins ? 1 : 0;
    h.n_qubits = spec.L_x + (h.test_spins ? 2 : 0);
    h.init_log_weight = h.n_qubits * kLn2;
    return h;
}

RowProgram compile_row(const CircuitProgram &h, const DisorderRealization &real, int y) {
    const LatticeSpec &s = h.spec;
    if (y < 0 || y >= s.L_y) {
        throw std::out_of_range("row index out of range");
    }
    RowProgram row;
    row.y = y;
    temporal_layer(h, real, y - 1, row.pre);
    int nsp = s.spatial_per_row();
    for (int x = 0; x < nsp; x++) {
        size_t k = (size_t)y * nsp + x;
        if (real.mask.spatial[k]) {
            push_zz(row.zz, GateKind::WeakZZ, h.couplings, h.lattice_offset + x, h.lattice_offset + (x + 1) % s.L_x,
                    real.spatial_sign[k]);
        }
    }
    if (h.test_spins) {
        test_spin_gates(h, real, y, row.zz);
    }
    temporal_layer(h, real, y, row.post);
    return row;
}

CircuitProgram compile(const LatticeSpec &spec, double t, double p_meas, const DisorderRealization &real) {
    if (spec.has_test_spins()) {
        LatticeSpec bare = spec;
        bare.protocol = Protocol::Cat;
        DisorderRealization bare_real = real;
        bare_real.spec = bare;
        bare_real.mask.test.clear();
        bare_real.test_sign.clear();
        CircuitProgram prog = compile(bare, t, p_meas, bare_real);
        prog.spec = spec;
        attach_test_spins(prog, real);
        return prog;
    }
    CircuitProgram prog = program_header(spec, t, p_meas);
    check_matches(prog, real);
    if (!is_temporal_gauge_fixed(real)) {
        throw std::invalid_argument("realization is not temporal-gauge-fixed");
    }
    prog.rows.reserve(spec.L_y);
    for (int y = 0; y < spec.L_y; y++) {
        prog.rows.push_back(compile_row(prog, real, y));
    }
    return prog;
}

void attach_test_spins(CircuitProgram &prog, const DisorderRealization &real) {
    if (prog.test_spins) {
        throw std::invalid_argument("program already has test spins");
    }
    if (prog.periodic || prog.spec.periodic()) {
        throw std::invalid_argument("test spins require an open x boundary");
    }
    LatticeSpec spec = prog.spec;
    spec.protocol = Protocol::SurfaceCode;
    CircuitProgram h = program_header(spec, prog.t, prog.p_meas);
    check_matches(h, real);
    for (auto &row : prog.rows) {
        for (auto *layer : {&row.pre, &row.zz, &row.post}) {
            for (auto &g : *layer) {
                g.a += 1;
                g.b += 1;
            }
        }
        test_spin_gates(h, real, row.y, row.zz);
    }
    h.rows = std::move(prog.rows);
    h.terminal_cap = prog.terminal_cap;
    prog = std::move(h);
}

std::vector<Gate> fuse_x_layers(const std::vector<Gate> &post, const std::vector<Gate> &pre) {
    std::map<int, Gate> by_site;
    for (const auto *layer : {&post, &pre}) {
        for (const Gate &g : *layer) {
            if (g.kind != GateKind::WeakX && g.kind != GateKind::ProjXPlus) {
                throw std::invalid_argument("fuse_x_layers expects single-site X gates");
            }
            auto it = by_site.find(g.a);
            if (it == by_site.end()) {
                by_site.emplace(g.a, g);
                continue;
            }
            Gate &f = it->second;
            if (f.kind == GateKind::ProjXPlus && g.kind == GateKind::ProjXPlus) {
                f.log_scale += g.log_scale;
            } else if (f.kind == GateKind::ProjXPlus) {
                // e^{cX} P+ = e^{c} P+
                f.log_scale += g.log_scale + g.coeff;
            } else if (g.kind == GateKind::ProjXPlus) {
                f = Gate{GateKind::ProjXPlus, g.a, g.a, 1, kInf, f.log_scale + f.coeff + g.log_scale};
            } else {
                f.coeff += g.coeff;
                f.log_scale += g.log_scale;
            }
        }
    }
    std::vector<Gate> out;
    out.reserve(by_site.size());
    for (auto &[q, g] : by_site) {
        out.push_back(g);
    }
    return out;
}

SignModel parse_sign_model(const std::string &s) {
    if (s == "nishimori") {
        return SignModel::Nishimori;
    }
    if (s == "clean") {
        return SignModel::Clean;
    }
    throw std::invalid_argument("unknown sign model '" + s + "' (expected nishimori|clean)");
}

std::string to_string(SignModel m) {
    return m == SignModel::Clean ? "clean" : "nishimori";
}

RowStream::RowStream(const LatticeSpec &spec, double t, double p_meas, SignModel model, uint64_t seed,
                     uint64_t index)
    : header_(program_header(spec, t, p_meas)),
      model_(model),
      q_plus_(prob_plus(t)),
      dilution_(seed, index, Purpose::Dilution),
      signs_(seed, index, Purpose::Signs),
      flip_(spec.L_x, 1) {
    if (spec.has_test_spins()) {
        throw std::invalid_argument("RowStream supports the cat protocol only");
    }
    if (model == SignModel::Nishimori && !(t > 0)) {
        throw std::invalid_argument("t must be positive for Nishimori sampling");
    }
    header_.terminal_cap = false;
}

int8_t RowStream::draw_sign() {
    if (model_ == SignModel::Clean) {
        return 1;
    }
    return signs_.bernoulli(q_plus_) ? 1 : -1;
}

RowProgram RowStream::next(bool last) {
    const LatticeSpec &s = header_.spec;
    const DualCouplings &c = header_.couplings;
    int off = header_.lattice_offset;
    RowProgram row;
    row.y = y_;
    for (int x = 0; x < s.L_x; x++) {
        if (y_ == 0) {
            push_cap_half(row.pre, c, off + x);
        } else if (prev_temporal_[x]) {
            push_measured_half(row.pre, c, off + x);
        } else {
            push_unmeasured_half(row.pre, off + x);
        }
    }
    int nsp = s.spatial_per_row();
    raw_.spatial_mask.assign(nsp, 0);
    raw_.spatial_sign.assign(nsp, 0);
    for (int x = 0; x < nsp; x++) {
        if (!dilution_.bernoulli(header_.p_meas)) {
            continue;
        }
        int8_t sg = draw_sign();
        raw_.spatial_mask[x] = 1;
        raw_.spatial_sign[x] = sg;
        push_zz(row.zz, GateKind::WeakZZ, c, off + x, off + (x + 1) % s.L_x,
                (int8_t)(sg * flip_[x] * flip_[(x + 1) % s.L_x]));
    }
    raw_.temporal_mask.clear();
    raw_.temporal_sign.clear();
    if (last) {
        for (int x = 0; x < s.L_x; x++) {
            push_cap_half(row.post, c, off + x);
        }
    } else {
        raw_.temporal_mask.assign(s.L_x, 0);
        raw_.temporal_sign.assign(s.L_x, 0);
        prev_temporal_.assign(s.L_x, 0);
        for (int x = 0; x < s.L_x; x++) {
            if (!dilution_.bernoulli(header_.p_meas)) {
                push_unmeasured_half(row.post, off + x);
                continue;
            }
            int8_t sg = draw_sign();
            raw_.temporal_mask[x] = 1;
            raw_.temporal_sign[x] = sg;
            prev_temporal_[x] = 1;
            // Flip (x, y + 1) so the gauge-fixed temporal sign is +1.
            flip_[x] = (int8_t)(flip_[x] * sg);
            push_measured_half(row.post, c, off + x);
        }
    }
    y_++;
    return row;
}

void write_dump(std::ostream &out, const CircuitProgram &prog) {
    char buf[128];
    for (const auto &row : prog.rows) {
        for (const auto *layer : {&row.pre, &row.zz, &row.post}) {
            for (const Gate &g : *layer) {
                std::snprintf(buf, sizeof(buf), "%d %s %d %d %.17g\n", row.y, to_string(g.kind).c_str(), g.a,
                              g.is_zz() ? (int)g.sign : 0, g.coeff);
                out << buf;
            }
        }
    }
}

}  // namespace mipt
