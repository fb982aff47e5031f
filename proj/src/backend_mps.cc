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

#include "mipt/backend_mps.h"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mipt/linalg.h"
#include "mipt/spectra.h"

namespace mipt {

namespace {

using Mat = Eigen::MatrixXd;

// Diagonal weights of a ZZ gate with the e^{coeff} prefactor factored out:
// aligned pairs keep weight 1, anti-aligned ones get e^{-2 coeff}.
double anti_weight(const Gate &g) {
    return std::isinf(g.coeff) ? 0.0 : std::exp(-2 * g.coeff);
}

double gate_prefactor(const Gate &g) {
    if (g.kind == GateKind::ProjXPlus || std::isinf(g.coeff)) {
        return g.log_scale;
    }
    return g.log_scale + g.coeff;
}

}  // namespace

MpsState::MpsState(int n_qubits, double cutoff, int chi_max) : n_(n_qubits), cutoff_(cutoff), chi_max_(chi_max) {
    if (n_qubits < 2) {
        throw std::invalid_argument("MPS needs at least two sites");
    }
    if (!(cutoff >= 0) || chi_max < 1) {
        throw std::invalid_argument("bad MPS truncation parameters");
    }
    a_.resize(n_);
    for (auto &site : a_) {
        site[0] = Mat::Constant(1, 1, 1 / std::sqrt(2.0));
        site[1] = Mat::Constant(1, 1, 1 / std::sqrt(2.0));
    }
    schmidt_.assign(n_, {1.0});
    canonical_ = true;
}

void MpsState::apply_layer(const std::vector<Gate> &layer) {
    size_t i = 0;
    while (i < layer.size()) {
        if (!layer[i].is_zz()) {
            apply_x(layer[i]);
            i++;
            continue;
        }
        size_t j = i;
        while (j < layer.size() && layer[j].is_zz()) {
            j++;
        }
        apply_zz_layer(std::vector<Gate>(layer.begin() + i, layer.begin() + j));
        i = j;
    }
}

void MpsState::apply_x(const Gate &g) {
    auto &site = a_[g.a];
    double w = g.kind == GateKind::WeakX ? std::exp(-2 * g.coeff) : 0.0;
    // e^{cX} = e^{c} (P+ + e^{-2c} P-)
    Mat plus = 0.5 * (site[0] + site[1]);
    Mat minus = 0.5 * w * (site[0] - site[1]);
    site[0] = plus + minus;
    site[1] = plus - minus;
    log_weight_ += gate_prefactor(g);
    canonical_ = false;
}

void MpsState::apply_zz_layer(const std::vector<Gate> &gates) {
    // Diagonal gates commute: combine those on the same bond.
    std::map<int, std::array<double, 2>> bond;  // weights for aligned / anti-aligned
    std::vector<Gate> wraps;
    for (const Gate &g : gates) {
        log_weight_ += gate_prefactor(g);
        int lo = std::min(g.a, g.b), hi = std::max(g.a, g.b);
        if (hi - lo != 1) {
            if (lo != 0 || hi != n_ - 1) {
                throw std::invalid_argument("MPS supports nearest-neighbour and wrap ZZ gates only");
            }
            wraps.push_back(g);
            continue;
        }
        auto it = bond.try_emplace(lo, std::array<double, 2>{1.0, 1.0}).first;
        double w = anti_weight(g);
        // Weight for parity equal (z1 z2 = +1) and opposite.
        if (g.sign == 1) {
            it->second[1] *= w;
        } else {
            it->second[0] *= w;
        }
    }
    if (!bond.empty()) {
        right_canonicalize();
        for (int k = 0; k + 1 < n_; k++) {
            auto it = bond.find(k);
            if (it == bond.end()) {
                // Move the centre one site right.
                Mat m(2 * a_[k][0].rows(), a_[k][0].cols());
                m << a_[k][0], a_[k][1];
                Eigen::HouseholderQR<Mat> qr(m);
                int r = (int)std::min(m.rows(), m.cols());
                Mat q = qr.householderQ() * Mat::Identity(m.rows(), r);
                Mat rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
                a_[k][0] = q.topRows(m.rows() / 2);
                a_[k][1] = q.bottomRows(m.rows() / 2);
                a_[k + 1][0] = rr * a_[k + 1][0];
                a_[k + 1][1] = rr * a_[k + 1][1];
                continue;
            }
            const auto &w = it->second;
            Eigen::Index dl = a_[k][0].rows(), dr = a_[k + 1][0].cols();
            Mat theta(2 * dl, 2 * dr);
            for (int s1 = 0; s1 < 2; s1++) {
                for (int s2 = 0; s2 < 2; s2++) {
                    double f = w[s1 == s2 ? 0 : 1];
                    theta.block(s1 * dl, s2 * dr, dl, dr) = f * (a_[k][s1] * a_[k + 1][s2]);
                }
            }
            Svd svd = thin_svd(theta);
            const Eigen::VectorXd &s = svd.s;
            int chi = truncation_rank(s, k + 1);
            Mat u = svd.u.leftCols(chi);
            Mat sv = s.head(chi).asDiagonal() * svd.vt.topRows(chi);
            a_[k][0] = u.topRows(dl);
            a_[k][1] = u.bottomRows(dl);
            a_[k + 1][0] = sv.leftCols(dr);
            a_[k + 1][1] = sv.rightCols(dr);
        }
    }
    for (const Gate &g : wraps) {
        apply_wrap(g);
    }
    canonical_ = false;
}

void MpsState::apply_wrap(const Gate &g) {
    // e^{c s Z Z} / e^{c} = alpha I + beta Z_0 Z_{n-1}: a bond-dimension-2 MPO.
    double w = anti_weight(g);
    double alpha = 0.5 * (1 + w);
    double beta = 0.5 * g.sign * (1 - w);
    for (int k = 0; k < n_; k++) {
        for (int s = 0; s < 2; s++) {
            const Mat &m = a_[k][s];
            double z = s == 0 ? 1.0 : -1.0;
            Mat out;
            if (k == 0) {
                out.resize(m.rows(), 2 * m.cols());
                out << m, z * m;
            } else if (k == n_ - 1) {
                out.resize(2 * m.rows(), m.cols());
                out << alpha * m, beta * z * m;
            } else {
                out = Mat::Zero(2 * m.rows(), 2 * m.cols());
                out.topLeftCorner(m.rows(), m.cols()) = m;
                out.bottomRightCorner(m.rows(), m.cols()) = m;
            }
            a_[k][s] = std::move(out);
        }
    }
}

void MpsState::right_canonicalize() {
    for (int k = n_ - 1; k > 0; k--) {
        Eigen::Index dl = a_[k][0].rows(), dr = a_[k][0].cols();
        Mat m(dl, 2 * dr);
        m << a_[k][0], a_[k][1];
        Mat mt = m.transpose();
        Eigen::HouseholderQR<Mat> qr(mt);
        int r = (int)std::min(mt.rows(), mt.cols());
        Mat q = qr.householderQ() * Mat::Identity(mt.rows(), r);
        Mat rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        Mat qt = q.transpose();
        a_[k][0] = qt.leftCols(dr);
        a_[k][1] = qt.rightCols(dr);
        Mat rt = rr.transpose();
        a_[k - 1][0] = a_[k - 1][0] * rt;
        a_[k - 1][1] = a_[k - 1][1] * rt;
    }
}

void MpsState::left_canonicalize() {
    for (int k = 0; k + 1 < n_; k++) {
        Eigen::Index dl = a_[k][0].rows();
        Mat m(2 * dl, a_[k][0].cols());
        m << a_[k][0], a_[k][1];
        Eigen::HouseholderQR<Mat> qr(m);
        int r = (int)std::min(m.rows(), m.cols());
        Mat q = qr.householderQ() * Mat::Identity(m.rows(), r);
        Mat rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        a_[k][0] = q.topRows(dl);
        a_[k][1] = q.bottomRows(dl);
        a_[k + 1][0] = rr * a_[k + 1][0];
        a_[k + 1][1] = rr * a_[k + 1][1];
    }
}

int MpsState::truncation_rank(const Eigen::VectorXd &s, int cut) {
    double total = s.squaredNorm();
    if (!(total > 0)) {
        throw std::runtime_error("zero-norm MPS: inconsistent forced outcome");
    }
    int chi = (int)s.size();
    double tail = 0;
    while (chi > 1) {
        double next = tail + s[chi - 1] * s[chi - 1];
        if (next > cutoff_ * total) {
            break;
        }
        tail = next;
        chi--;
    }
    max_discarded_ = std::max(max_discarded_, tail / total);
    if (chi > chi_max_) {
        throw std::runtime_error("MPS bond dimension " + std::to_string(chi) + " at cut " + std::to_string(cut) +
                                 " exceeds chi_max " + std::to_string(chi_max_));
    }
    return chi;
}

void MpsState::svd_sweep_right_to_left() {
    for (int k = n_ - 1; k > 0; k--) {
        Eigen::Index dl = a_[k][0].rows(), dr = a_[k][0].cols();
        Mat m(dl, 2 * dr);
        m << a_[k][0], a_[k][1];
        Svd svd = thin_svd(m);
        const Eigen::VectorXd &s = svd.s;
        int chi = truncation_rank(s, k);
        Mat vt = svd.vt.topRows(chi);
        a_[k][0] = vt.leftCols(dr);
        a_[k][1] = vt.rightCols(dr);
        Mat us = svd.u.leftCols(chi) * s.head(chi).asDiagonal();
        a_[k - 1][0] = a_[k - 1][0] * us;
        a_[k - 1][1] = a_[k - 1][1] * us;
        double total = s.head(chi).squaredNorm();
        std::vector<double> probs(chi);
        for (int j = 0; j < chi; j++) {
            probs[j] = s[j] * s[j] / total;
        }
        schmidt_[k] = std::move(probs);
    }
    double norm = std::sqrt(a_[0][0].squaredNorm() + a_[0][1].squaredNorm());
    if (!(norm > 0)) {
        throw std::runtime_error("zero-norm MPS: inconsistent forced outcome");
    }
    a_[0][0] /= norm;
    a_[0][1] /= norm;
    log_weight_ += std::log(norm);
}

void MpsState::end_row() {
    left_canonicalize();
    svd_sweep_right_to_left();
    canonical_ = true;
}

void MpsState::ensure_canonical() {
    if (!canonical_) {
        end_row();
    }
}

const std::vector<double> &MpsState::schmidt_probs(int l) {
    if (l <= 0 || l >= n_) {
        throw std::out_of_range("cut position out of range");
    }
    ensure_canonical();
    return schmidt_[l];
}

int MpsState::bond_dim(int l) const {
    if (l <= 0 || l >= n_) {
        return 1;
    }
    return (int)a_[l][0].rows();
}

int MpsState::max_bond_dim() const {
    int d = 1;
    for (int l = 1; l < n_; l++) {
        d = std::max(d, bond_dim(l));
    }
    return d;
}

std::vector<double> MpsState::entropies(int start, int len, const std::vector<double> &renyi) {
    int s = ((start % n_) + n_) % n_;
    std::vector<double> out(renyi.size(), 0.0);
    if (len <= 0 || len >= n_) {
        return out;
    }
    int cut;
    if (s == 0) {
        cut = len;
    } else if (s + len == n_) {
        cut = s;
    } else {
        throw std::invalid_argument("MPS entropies are available for prefix and suffix arcs only");
    }
    const auto &p = schmidt_probs(cut);
    for (size_t i = 0; i < renyi.size(); i++) {
        out[i] = renyi_from_probs(p, renyi[i]);
    }
    return out;
}

std::vector<std::vector<double>> MpsState::entropy_profile(const std::vector<double> &renyi) {
    std::vector<std::vector<double>> out;
    for (int l = 1; l < n_; l++) {
        out.push_back(entropies(0, l, renyi));
    }
    return out;
}

double MpsState::log_overlap_plus() const {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    double log_scale = 0;
    const double r = 1 / std::sqrt(2.0);
    for (int k = 0; k < n_; k++) {
        v = (v * (a_[k][0] + a_[k][1]) * r).eval();
        double m = v.cwiseAbs().maxCoeff();
        if (m == 0) {
            return -std::numeric_limits<double>::infinity();
        }
        v /= m;
        log_scale += std::log(m);
    }
    double x = v(0);
    if (!(x > 0)) {
        return x == 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
    }
    return log_scale + std::log(x);
}

double MpsState::capped_correlator(int a, int b) const {
    Eigen::RowVectorXd num = Eigen::RowVectorXd::Ones(1);
    Eigen::RowVectorXd den = Eigen::RowVectorXd::Ones(1);
    for (int k = 0; k < n_; k++) {
        Mat plus = a_[k][0] + a_[k][1];
        den = (den * plus).eval();
        if (k == a || k == b) {
            num = (num * (a_[k][0] - a_[k][1])).eval();
        } else {
            num = (num * plus).eval();
        }
        double m = den.cwiseAbs().maxCoeff();
        if (m == 0) {
            throw std::runtime_error("state orthogonal to |+>: correlator undefined");
        }
        num /= m;
        den /= m;
    }
    return num(0) / den(0);
}

}  // namespace mipt
