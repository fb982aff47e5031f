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

#include "mipt/backend_exact.h"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "mipt/linalg.h"
#include "mipt/spectra.h"

namespace mipt {

DenseState::DenseState(int n_qubits, int max_qubits) : n_(n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("dense state needs at least one qubit");
    }
    if (n_qubits > max_qubits) {
        throw std::invalid_argument("dense state of " + std::to_string(n_qubits) + " qubits exceeds the guard of " +
                                    std::to_string(max_qubits));
    }
    size_t dim = (size_t)1 << n_;
    amp_.assign(dim, 1.0 / std::sqrt((double)dim));
}

void DenseState::apply_gate(const Gate &g) {
    size_t dim = amp_.size();
    log_weight_ += g.log_scale;
    if (g.is_zz()) {
        int sa = n_ - 1 - g.a;
        int sb = n_ - 1 - g.b;
        bool proj = std::isinf(g.coeff);
        double weak = proj ? 0.0 : std::exp(-2 * g.coeff);
        if (!proj) {
            log_weight_ += g.coeff;
        }
        for (size_t i = 0; i < dim; i++) {
            int parity = (int)(((i >> sa) ^ (i >> sb)) & 1);
            bool aligned = (parity == 0) == (g.sign == 1);
            if (!aligned) {
                amp_[i] *= weak;
            }
        }
        return;
    }
    size_t m = (size_t)1 << (n_ - 1 - g.a);
    double weak = 0;
    if (g.kind == GateKind::WeakX) {
        weak = std::exp(-2 * g.coeff);
        log_weight_ += g.coeff;
    }
    for (size_t i = 0; i < dim; i++) {
        if (i & m) {
            continue;
        }
        double u = amp_[i];
        double v = amp_[i | m];
        double plus = 0.5 * (u + v);
        double minus = 0.5 * (u - v) * weak;
        amp_[i] = plus + minus;
        amp_[i | m] = plus - minus;
    }
}

void DenseState::apply_layer(const std::vector<Gate> &layer) {
    for (const Gate &g : layer) {
        apply_gate(g);
    }
}

void DenseState::apply_row(const RowProgram &row) {
    apply_layer(row.pre);
    apply_layer(row.zz);
    apply_layer(row.post);
    normalize();
}

void DenseState::normalize() {
    double s = 0;
    for (double a : amp_) {
        s += a * a;
    }
    if (!(s > 0)) {
        throw std::runtime_error("zero-norm state: inconsistent forced outcome");
    }
    double norm = std::sqrt(s);
    for (double &a : amp_) {
        a /= norm;
    }
    log_weight_ += std::log(norm);
}

std::vector<double> DenseState::reduced_spectrum(int start, int len) const {
    if (len < 0 || len > n_) {
        throw std::out_of_range("interval length out of range");
    }
    if (len == 0 || len == n_) {
        return {1.0};
    }
    std::vector<int> inside, outside;
    for (int k = 0; k < n_; k++) {
        int q = ((start + k) % n_ + n_) % n_;
        (k < len ? inside : outside).push_back(q);
    }
    Eigen::MatrixXd m((Eigen::Index)1 << len, (Eigen::Index)1 << (n_ - len));
    for (size_t i = 0; i < amp_.size(); i++) {
        size_t r = 0, c = 0;
        for (int q : inside) {
            r = (r << 1) | ((i >> (n_ - 1 - q)) & 1);
        }
        for (int q : outside) {
            c = (c << 1) | ((i >> (n_ - 1 - q)) & 1);
        }
        m((Eigen::Index)r, (Eigen::Index)c) = amp_[i];
    }
    Eigen::VectorXd s = singular_values(m);
    std::vector<double> out(s.size());
    for (Eigen::Index k = 0; k < s.size(); k++) {
        out[k] = s[k] * s[k];
    }
    return out;
}

double DenseState::entropy(int start, int len, double renyi) const {
    return renyi_from_probs(reduced_spectrum(start, len), renyi);
}

std::vector<double> DenseState::entropy_profile(double renyi) const {
    std::vector<double> out;
    for (int l = 1; l < n_; l++) {
        out.push_back(entropy(0, l, renyi));
    }
    return out;
}

double DenseState::overlap_plus() const {
    double s = 0;
    for (double a : amp_) {
        s += a;
    }
    return s / std::sqrt((double)amp_.size());
}

double DenseState::capped_zz(int a, int b) const {
    double num = 0, den = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        int parity = (int)(((i >> (n_ - 1 - a)) ^ (i >> (n_ - 1 - b))) & 1);
        num += parity ? -amp_[i] : amp_[i];
        den += amp_[i];
    }
    return num / den;
}

void DenseState::dump(std::ostream &out) const {
    char buf[64];
    for (size_t i = 0; i < amp_.size(); i++) {
        std::snprintf(buf, sizeof(buf), "%zu %.17g\n", i, amp_[i]);
        out << buf;
    }
}

DenseState evolve(const CircuitProgram &prog, int max_qubits) {
    DenseState st(prog.n_qubits, max_qubits);
    st.set_log_weight(prog.init_log_weight);
    for (const auto &row : prog.rows) {
        st.apply_row(row);
    }
    return st;
}

double log_partition(const CircuitProgram &prog, int max_qubits) {
    DenseState st = evolve(prog, max_qubits);
    double ov = st.overlap_plus();
    if (!(ov > 0)) {
        throw std::runtime_error("nonpositive overlap with |+>: compiler bug");
    }
    return st.log_weight() + std::log(ov);
}

std::map<std::string, double> born_enumerate(const LatticeSpec &spec, double t, double p_meas, int max_bonds,
                                             const std::function<void(CircuitProgram &)> &mutate) {
    spec.validate();
    size_t nb = spec.num_bonds();
    if ((int)nb > max_bonds) {
        throw std::invalid_argument("born_enumerate: " + std::to_string(nb) + " bonds exceed the guard of " +
                                    std::to_string(max_bonds));
    }
    DualCouplings c = couplings_from_t(t);
    // sum_s Z(s) = 2^N prod_b 2 cosh(beta); with e^{beta} dropped at beta = inf.
    double log_bond_norm = std::isinf(c.beta) ? 0.0 : c.beta + std::log1p(std::exp(-2 * c.beta));
    double log_sites = (double)spec.num_sites() * kLn2;

    DisorderRealization real;
    real.spec = spec;
    real.t = t;
    real.p_meas = p_meas;
    std::map<std::string, double> dist;
    for (uint64_t mbits = 0; mbits < ((uint64_t)1 << nb); mbits++) {
        int nm = std::popcount(mbits);
        double pmask = std::pow(p_meas, nm) * std::pow(1 - p_meas, (double)nb - nm);
        if (pmask == 0) {
            continue;
        }
        std::vector<int> measured;
        for (size_t k = 0; k < nb; k++) {
            if ((mbits >> k) & 1) {
                measured.push_back((int)k);
            }
        }
        for (uint64_t sbits = 0; sbits < ((uint64_t)1 << nm); sbits++) {
            real.mask.spatial.assign(spec.num_spatial(), 0);
            real.mask.temporal.assign(spec.num_temporal(), 0);
            real.mask.test.assign(spec.num_test(), 0);
            real.spatial_sign.assign(spec.num_spatial(), 0);
            real.temporal_sign.assign(spec.num_temporal(), 0);
            real.test_sign.assign(spec.num_test(), 0);
            for (int j = 0; j < nm; j++) {
                size_t k = (size_t)measured[j];
                int8_t sign = ((sbits >> j) & 1) ? -1 : 1;
                if (k < spec.num_spatial()) {
                    real.mask.spatial[k] = 1;
                    real.spatial_sign[k] = sign;
                } else if (k < spec.num_spatial() + spec.num_temporal()) {
                    k -= spec.num_spatial();
                    real.mask.temporal[k] = 1;
                    real.temporal_sign[k] = sign;
                } else {
                    k -= spec.num_spatial() + spec.num_temporal();
                    real.mask.test[k] = 1;
                    real.test_sign[k] = sign;
                }
            }
            DisorderRealization fixed = gauge_fix_temporal(real);
            CircuitProgram prog = compile(spec, t, p_meas, fixed);
            if (mutate) {
                mutate(prog);
            }
            double w;
            try {
                w = std::exp(log_partition(prog) - log_sites - nm * log_bond_norm);
            } catch (const std::runtime_error &) {
                // Frustrated loop of projective bonds: Z = 0.
                w = 0;
            }
            if (w > 0) {
                dist[vortices(real).key()] += pmask * w;
            }
        }
    }
    return dist;
}

}  // namespace mipt
