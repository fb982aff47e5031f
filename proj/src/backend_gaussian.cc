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

#include "mipt/backend_gaussian.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "mipt/linalg.h"
#include "mipt/spectra.h"

namespace mipt {

namespace {

using Mat = Eigen::MatrixXd;
using cd = std::complex<double>;

constexpr double kProjectorFloor = 1e-14;
/// Modes are re-orthonormalized before any column grows by more than
/// e^kMaxModeGrowth; round-off in Gamma stays near 1e-16 e^(2 kMaxModeGrowth).
constexpr double kMaxModeGrowth = 7;
constexpr double kNuTolerance = 1e-9;
constexpr char kCheckpointMagic[8] = {'M', 'I', 'P', 'T', 'G', 'M', '0', '1'};

// ln cosh(x) for x >= 0 without overflow.
double log_cosh(double x) {
    return x + std::log1p(std::exp(-2 * x)) - std::log(2.0);
}

// Arc [start, start + len) mod n as a non-wrapping range of qubits. Pure
// states have equal entropies on complementary arcs.
std::pair<int, int> unwrap_arc(int start, int len, int n) {
    int s = ((start % n) + n) % n;
    if (s + len <= n) {
        return {s, len};
    }
    int cs = (s + len) % n;
    return {cs, n - len};
}

}  // namespace

MajoranaPair majorana_pair(const Gate &g, int n) {
    double theta = std::isinf(g.coeff) ? std::numeric_limits<double>::infinity() : 2 * g.coeff;
    if (g.kind == GateKind::ProjXPlus) {
        return {2 * g.a, 2 * g.a + 1, std::numeric_limits<double>::infinity()};
    }
    if (g.kind == GateKind::WeakX) {
        return {2 * g.a, 2 * g.a + 1, theta};
    }
    int lo = std::min(g.a, g.b), hi = std::max(g.a, g.b);
    if (hi - lo == 1) {
        if (g.sign < 0) {
            // Negative sign: swap the pair (h -> -h).
            return {2 * lo + 2, 2 * lo + 1, theta};
        }
        return {2 * lo + 1, 2 * lo + 2, theta};
    }
    if (lo == 0 && hi == n - 1) {
        if (g.sign < 0) {
            return {2 * n - 1, 0, theta};
        }
        return {0, 2 * n - 1, theta};
    }
    throw std::invalid_argument("Gaussian backend supports nearest-neighbour and wrap ZZ gates only");
}

double pfaffian(Mat a) {
    if (a.rows() != a.cols() || a.rows() % 2) {
        throw std::invalid_argument("pfaffian needs an even square matrix");
    }
    Eigen::Index n = a.rows();
    double pf = 1;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
        kp += k + 1;
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (a(k + 1, k) == 0) {
            return 0;
        }
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            Eigen::VectorXd tau = a.row(k).tail(n - k - 2).transpose() / a(k, k + 1);
            Eigen::VectorXd col = a.col(k + 1).tail(n - k - 2);
            a.bottomRightCorner(n - k - 2, n - k - 2) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

std::vector<double> covariance_block_nu(const Mat &block) {
    Eigen::Index m = block.rows() / 2;
    // Singular values directly (not via block^T block) keep absolute accuracy
    // near nu = 0. They come in degenerate pairs; take one of each.
    Eigen::VectorXd sv = singular_values(block);
    std::vector<double> nu(m);
    for (Eigen::Index k = 0; k < m; k++) {
        double v = sv(2 * k);
        if (v > 1 + kNuTolerance) {
            throw std::runtime_error("covariance spectrum outside [0, 1]: " + std::to_string(v));
        }
        nu[k] = std::min(v, 1.0);
    }
    return nu;
}

MajoranaState::MajoranaState(int n_qubits, int stabilize_every)
    : n_(n_qubits), stabilize_every_(stabilize_every), gamma_(Mat::Zero(2 * n_qubits, 2 * n_qubits)) {
    if (n_qubits < 2) {
        throw std::invalid_argument("Majorana state needs at least two qubits");
    }
    for (int q = 0; q < n_; q++) {
        gamma_(2 * q, 2 * q + 1) = 1;
        gamma_(2 * q + 1, 2 * q) = -1;
    }
}

MajoranaState MajoranaState::from_covariance(const Mat &gamma, int stabilize_every) {
    if (gamma.rows() != gamma.cols() || gamma.rows() % 2 || gamma.rows() < 4) {
        throw std::invalid_argument("covariance must be 2n x 2n with n >= 2");
    }
    MajoranaState s((int)gamma.rows() / 2, stabilize_every);
    s.gamma_ = gamma;
    return s;
}

void MajoranaState::apply_weight(int a, int b, double theta) {
    if (std::isinf(theta)) {
        if (theta < 0) {
            std::swap(a, b);
        }
        apply_projector(a, b);
        return;
    }
    if (theta == 0) {
        return;
    }
    if (theta < 0) {
        std::swap(a, b);
        theta = -theta;
    }
    double half = theta / 2;
    double tau = std::tanh(half);
    double one_minus_tau = 2 / (1 + std::exp(theta));
    double sech2 = 1 / (std::cosh(half) * std::cosh(half));
    double g = gamma_(a, b);
    double d = one_minus_tau * one_minus_tau + 2 * tau * (1 + g);
    Eigen::VectorXd u = gamma_.col(a);
    Eigen::VectorXd v = gamma_.col(b);
    double f = 2 * tau / d;
    gamma_.noalias() -= f * (u * v.transpose() - v * u.transpose());
    double scale = sech2 / d;
    gamma_.col(a) = scale * u;
    gamma_.col(b) = scale * v;
    gamma_.row(a) = -scale * u.transpose();
    gamma_.row(b) = -scale * v.transpose();
    double gab = ((1 + tau * tau) * g + 2 * tau) / d;
    gamma_(a, a) = 0;
    gamma_(b, b) = 0;
    gamma_(a, b) = gab;
    gamma_(b, a) = -gab;
    log_weight_ += log_cosh(half) + 0.5 * std::log(d);
    if (stabilize_every_ > 0 && ++since_stabilize_ >= stabilize_every_) {
        stabilize();
    }
}

void MajoranaState::apply_projector(int a, int b) {
    double g = gamma_(a, b);
    double prob = 0.5 * (1 + g);
    if (prob < kProjectorFloor) {
        throw std::runtime_error("projection probability " + std::to_string(prob) + " below floor");
    }
    Eigen::VectorXd u = gamma_.col(a);
    Eigen::VectorXd v = gamma_.col(b);
    gamma_.noalias() -= (1 / (1 + g)) * (u * v.transpose() - v * u.transpose());
    gamma_.col(a).setZero();
    gamma_.col(b).setZero();
    gamma_.row(a).setZero();
    gamma_.row(b).setZero();
    gamma_(a, b) = 1;
    gamma_(b, a) = -1;
    log_weight_ += 0.5 * std::log(prob);
    if (stabilize_every_ > 0 && ++since_stabilize_ >= stabilize_every_) {
        stabilize();
    }
}

void MajoranaState::apply_layer(const std::vector<Gate> &layer) {
    for (const Gate &g : layer) {
        MajoranaPair p = majorana_pair(g, n_);
        apply_weight(p.a, p.b, p.theta);
        log_weight_ += g.log_scale;
    }
}

void MajoranaState::stabilize() {
    since_stabilize_ = 0;
    Mat g = 0.5 * (gamma_ - gamma_.transpose());
    // Newton-Schulz step towards the orthogonal polar factor.
    Mat g2 = g * g;
    g2.diagonal().array() += 3;
    gamma_.noalias() = 0.5 * g * g2;
    gamma_ = 0.5 * (gamma_ - gamma_.transpose()).eval();
}

double MajoranaState::purity_error() const {
    Mat e = gamma_ * gamma_.transpose();
    e.diagonal().array() -= 1;
    return e.cwiseAbs().maxCoeff();
}

std::vector<double> MajoranaState::interval_nu(int start, int len) const {
    if (len <= 0 || len >= n_) {
        return {};
    }
    auto [s, l] = unwrap_arc(start, len, n_);
    return covariance_block_nu(gamma_.block(2 * s, 2 * s, 2 * l, 2 * l));
}

std::vector<double> MajoranaState::entropies(int start, int len, const std::vector<double> &renyi) {
    std::vector<double> out(renyi.size(), 0.0);
    if (len <= 0 || len >= n_) {
        return out;
    }
    auto nu = interval_nu(start, len);
    for (size_t i = 0; i < renyi.size(); i++) {
        out[i] = renyi_from_nu(nu, renyi[i]);
    }
    return out;
}

double MajoranaState::log_overlap_plus() const {
    MajoranaState t = *this;
    t.stabilize_every_ = 0;
    t.log_weight_ = 0;
    for (int q = 0; q < n_; q++) {
        try {
            t.apply_projector(2 * q, 2 * q + 1);
        } catch (const std::runtime_error &) {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return t.log_weight_;
}

double MajoranaState::capped_correlator(int a, int b) const {
    if (a > b) {
        std::swap(a, b);
    }
    if (a == b) {
        return 1;
    }
    MajoranaState t = *this;
    t.stabilize_every_ = 0;
    for (int q = 0; q < n_; q++) {
        if (q == a || q == b) {
            continue;
        }
        try {
            t.apply_projector(2 * q, 2 * q + 1);
        } catch (const std::runtime_error &) {
            throw std::runtime_error("state orthogonal to |+>: correlator undefined");
        }
    }
    // Remaining pair in the X basis: psi = alpha |++> + beta |-->, so
    // C = beta / alpha = <Z_a Z_b> / (1 + <X_a>).
    double x = t.gamma_(2 * a, 2 * a + 1);
    if (1 + x < kProjectorFloor) {
        throw std::runtime_error("state orthogonal to |+>: correlator undefined");
    }
    int m = 2 * (b - a);
    double zz = pfaffian(t.gamma_.block(2 * a + 1, 2 * a + 1, m, m));
    return std::clamp(zz / (1 + x), -1.0, 1.0);
}

void MajoranaState::write_checkpoint(std::ostream &out, int64_t row_index) const {
    out.write(kCheckpointMagic, 8);
    int32_t n = n_, parity = 1;
    out.write(reinterpret_cast<const char *>(&n), 4);
    out.write(reinterpret_cast<const char *>(&parity), 4);
    out.write(reinterpret_cast<const char *>(&row_index), 8);
    out.write(reinterpret_cast<const char *>(&log_weight_), 8);
    for (Eigen::Index i = 0; i < gamma_.rows(); i++) {
        for (Eigen::Index j = 0; j < gamma_.cols(); j++) {
            double v = gamma_(i, j);
            out.write(reinterpret_cast<const char *>(&v), 8);
        }
    }
}

std::pair<MajoranaState, int64_t> MajoranaState::read_checkpoint(std::istream &in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
        throw std::runtime_error("not a covariance checkpoint");
    }
    int32_t n = 0, parity = 0;
    int64_t row = 0;
    double lw = 0;
    in.read(reinterpret_cast<char *>(&n), 4);
    in.read(reinterpret_cast<char *>(&parity), 4);
    in.read(reinterpret_cast<char *>(&row), 8);
    in.read(reinterpret_cast<char *>(&lw), 8);
    if (!in || n < 2 || parity != 1) {
        throw std::runtime_error("bad covariance checkpoint header");
    }
    Mat g(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < g.rows(); i++) {
        for (Eigen::Index j = 0; j < g.cols(); j++) {
            in.read(reinterpret_cast<char *>(&g(i, j)), 8);
        }
    }
    if (!in) {
        throw std::runtime_error("truncated covariance checkpoint");
    }
    MajoranaState s = from_covariance(g);
    s.log_weight_ = lw;
    return {std::move(s), row};
}

MajoranaModes::MajoranaModes(int n_qubits, int orthonormalize_rows)
    : n_(n_qubits), orthonormalize_rows_(orthonormalize_rows), w_(Eigen::MatrixXcd::Zero(n_qubits, 2 * n_qubits)),
      growth_(2 * n_qubits, 0.0) {
    if (n_qubits < 2) {
        throw std::invalid_argument("Majorana modes need at least two qubits");
    }
    const double r = 1 / std::sqrt(2.0);
    for (int q = 0; q < n_; q++) {
        w_(q, 2 * q) = r;
        w_(q, 2 * q + 1) = cd(0, r);
    }
}

void MajoranaModes::apply_weight(int a, int b, double theta) {
    if (std::isinf(theta)) {
        if (theta < 0) {
            std::swap(a, b);
        }
        apply_projector(a, b);
        return;
    }
    if (theta == 0) {
        return;
    }
    double g = std::max(growth_[a], growth_[b]) + std::abs(theta);
    growth_[a] = growth_[b] = g;
    double ch = std::cosh(theta), sh = std::sinh(theta);
    cd *pa = w_.col(a).data();
    cd *pb = w_.col(b).data();
    for (int k = 0; k < n_; k++) {
        cd x = pa[k], y = pb[k];
        // ch x - i sh y and ch y + i sh x.
        pa[k] = cd(ch * x.real() + sh * y.imag(), ch * x.imag() - sh * y.real());
        pb[k] = cd(ch * y.real() - sh * x.imag(), ch * y.imag() + sh * x.real());
    }
    orthonormal_ = false;
    if (g > kMaxModeGrowth) {
        orthonormalize();
    }
}

void MajoranaModes::apply_projector(int a, int b) {
    Eigen::VectorXcd alpha = w_.col(a) - cd(0, 1) * w_.col(b);
    Eigen::Index p;
    double amax = alpha.cwiseAbs().maxCoeff(&p);
    double scale = w_.cwiseAbs().maxCoeff();
    if (!(amax > kProjectorFloor * scale)) {
        throw std::runtime_error("projection onto an orthogonal state");
    }
    for (Eigen::Index k = 0; k < n_; k++) {
        if (k == p || alpha(k) == cd(0)) {
            continue;
        }
        cd f = alpha(k) / alpha(p);
        w_.row(k) -= f * w_.row(p);
    }
    w_.col(a).setZero();
    w_.col(b).setZero();
    w_.row(p).setZero();
    const double r = 1 / std::sqrt(2.0);
    w_(p, a) = r;
    w_(p, b) = cd(0, r);
    orthonormal_ = false;
}

void MajoranaModes::apply_layer(const std::vector<Gate> &layer) {
    for (const Gate &g : layer) {
        MajoranaPair p = majorana_pair(g, n_);
        apply_weight(p.a, p.b, p.theta);
    }
}

void MajoranaModes::end_row() {
    if (++rows_since_ >= orthonormalize_rows_) {
        orthonormalize();
    }
}

void MajoranaModes::orthonormalize() {
    rows_since_ = 0;
    std::fill(growth_.begin(), growth_.end(), 0.0);
    if (orthonormal_) {
        return;
    }
    Eigen::MatrixXcd wt = w_.adjoint();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(wt);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * n_, n_);
    w_ = q.adjoint();
    orthonormal_ = true;
}

double MajoranaModes::log_weight() const {
    return std::numeric_limits<double>::quiet_NaN();
}

Eigen::MatrixXd MajoranaModes::covariance() {
    orthonormalize();
    return 2 * (w_.adjoint() * w_).imag();
}

std::vector<double> MajoranaModes::entropies(int start, int len, const std::vector<double> &renyi) {
    std::vector<double> out(renyi.size(), 0.0);
    if (len <= 0 || len >= n_) {
        return out;
    }
    orthonormalize();
    auto [s, l] = unwrap_arc(start, len, n_);
    Eigen::MatrixXcd qa = w_.middleCols(2 * s, 2 * l);
    Mat block = 2 * (qa.adjoint() * qa).imag();
    auto nu = covariance_block_nu(block);
    for (size_t i = 0; i < renyi.size(); i++) {
        out[i] = renyi_from_nu(nu, renyi[i]);
    }
    return out;
}

std::vector<std::vector<double>> MajoranaModes::prefix_entropies(const std::vector<int> &cuts,
                                                                 const std::vector<double> &renyi) {
    Mat gamma = covariance();
    std::vector<std::vector<double>> out;
    for (int l : cuts) {
        if (l <= 0 || l >= n_) {
            throw std::out_of_range("cut position out of range");
        }
        // Use the shorter side of the cut; the state is pure.
        int s = l <= n_ / 2 ? 0 : l;
        int len = l <= n_ / 2 ? l : n_ - l;
        auto nu = covariance_block_nu(gamma.block(2 * s, 2 * s, 2 * len, 2 * len));
        std::vector<double> row(renyi.size());
        for (size_t i = 0; i < renyi.size(); i++) {
            row[i] = renyi_from_nu(nu, renyi[i]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<double>> MajoranaModes::entropy_profile(const std::vector<double> &renyi) {
    std::vector<int> cuts;
    for (int l = 1; l < n_; l++) {
        cuts.push_back(l);
    }
    return prefix_entropies(cuts, renyi);
}

double MajoranaModes::log_overlap_plus() const {
    MajoranaModes t = *this;
    return MajoranaState::from_covariance(t.covariance(), 0).log_overlap_plus();
}

double MajoranaModes::capped_correlator(int a, int b) const {
    MajoranaModes t = *this;
    return MajoranaState::from_covariance(t.covariance(), 0).capped_correlator(a, b);
}

}  // namespace mipt
