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

#include "mipt/backend_clifford.h"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mipt/couplings.h"

namespace mipt {

namespace {

int words_for(int n) {
    return (n + 63) / 64;
}

// Exponent of i (mod 4) picked up by the product P1 P2, summed over qubits.
int product_phase(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2, const uint64_t *z2, int words) {
    int total = 0;
    for (int w = 0; w < words; w++) {
        uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
        uint64_t plus = (a & ~b & c & d) | (a & b & ~c & d) | (~a & b & c & ~d);
        uint64_t minus = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d);
        total += std::popcount(plus) - std::popcount(minus);
    }
    return ((total % 4) + 4) % 4;
}

bool anticommute(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2, const uint64_t *z2, int words) {
    uint64_t acc = 0;
    for (int w = 0; w < words; w++) {
        acc ^= (x1[w] & z2[w]) ^ (z1[w] & x2[w]);
    }
    return std::popcount(acc) & 1;
}

void require_clifford(const Gate &g) {
    if (!g.is_projective()) {
        throw std::invalid_argument("Clifford backend accepts projective gates only (t = pi/4); got " +
                                    to_string(g.kind) + " with finite strength");
    }
}

}  // namespace

PauliString::PauliString(int n) : x(words_for(n), 0), z(words_for(n), 0) {}

PauliString PauliString::single_x(int n, int q) {
    PauliString p(n);
    p.set(q, true, false);
    return p;
}

PauliString PauliString::zz(int n, int a, int b) {
    PauliString p(n);
    p.set(a, false, true);
    p.set(b, false, true);
    return p;
}

void PauliString::set(int q, bool xb, bool zb) {
    uint64_t m = uint64_t{1} << (q & 63);
    x[q >> 6] = xb ? (x[q >> 6] | m) : (x[q >> 6] & ~m);
    z[q >> 6] = zb ? (z[q >> 6] | m) : (z[q >> 6] & ~m);
}

bool PauliString::commutes_with(const PauliString &o) const {
    return !anticommute(x.data(), z.data(), o.x.data(), o.z.data(), (int)x.size());
}

StabilizerTableau::StabilizerTableau(int n_qubits) : n_(n_qubits), words_(words_for(n_qubits)) {
    if (n_qubits < 1) {
        throw std::invalid_argument("tableau needs at least one qubit");
    }
    x_.assign((size_t)2 * n_ * words_, 0);
    z_.assign((size_t)2 * n_ * words_, 0);
    r_.assign(2 * n_, 0);
    for (int q = 0; q < n_; q++) {
        // Destabilizer Z_q, stabilizer X_q.
        z_[(size_t)q * words_ + (q >> 6)] |= uint64_t{1} << (q & 63);
        x_[(size_t)(n_ + q) * words_ + (q >> 6)] |= uint64_t{1} << (q & 63);
    }
}

PauliString StabilizerTableau::row(int i) const {
    PauliString p(n_);
    for (int w = 0; w < words_; w++) {
        p.x[w] = x_[(size_t)i * words_ + w];
        p.z[w] = z_[(size_t)i * words_ + w];
    }
    p.negative = r_[i];
    return p;
}

std::vector<PauliString> StabilizerTableau::stabilizers() const {
    std::vector<PauliString> out;
    for (int i = n_; i < 2 * n_; i++) {
        out.push_back(row(i));
    }
    return out;
}

void StabilizerTableau::rowsum(int h, int i) {
    uint64_t *xh = &x_[(size_t)h * words_], *zh = &z_[(size_t)h * words_];
    const uint64_t *xi = &x_[(size_t)i * words_], *zi = &z_[(size_t)i * words_];
    int phase = 2 * r_[h] + 2 * r_[i] + product_phase(xi, zi, xh, zh, words_);
    r_[h] = (phase % 4) == 2;
    for (int w = 0; w < words_; w++) {
        xh[w] ^= xi[w];
        zh[w] ^= zi[w];
    }
}

void StabilizerTableau::rowsum_into(PauliString &h, int i) const {
    const uint64_t *xi = &x_[(size_t)i * words_], *zi = &z_[(size_t)i * words_];
    int phase = 2 * h.negative + 2 * r_[i] + product_phase(xi, zi, h.x.data(), h.z.data(), words_);
    h.negative = (phase % 4) == 2;
    for (int w = 0; w < words_; w++) {
        h.x[w] ^= xi[w];
        h.z[w] ^= zi[w];
    }
}

int StabilizerTableau::find_anticommuting_stabilizer(const PauliString &p) const {
    for (int i = n_; i < 2 * n_; i++) {
        if (anticommute(&x_[(size_t)i * words_], &z_[(size_t)i * words_], p.x.data(), p.z.data(), words_)) {
            return i;
        }
    }
    return -1;
}

void StabilizerTableau::collapse(const PauliString &p, int pivot, bool negative) {
    for (int i = 0; i < 2 * n_; i++) {
        if (i != pivot &&
            anticommute(&x_[(size_t)i * words_], &z_[(size_t)i * words_], p.x.data(), p.z.data(), words_)) {
            rowsum(i, pivot);
        }
    }
    int d = pivot - n_;
    for (int w = 0; w < words_; w++) {
        x_[(size_t)d * words_ + w] = x_[(size_t)pivot * words_ + w];
        z_[(size_t)d * words_ + w] = z_[(size_t)pivot * words_ + w];
        x_[(size_t)pivot * words_ + w] = p.x[w];
        z_[(size_t)pivot * words_ + w] = p.z[w];
    }
    r_[d] = r_[pivot];
    r_[pivot] = negative;
}

int StabilizerTableau::peek(const PauliString &p) const {
    if (find_anticommuting_stabilizer(p) >= 0) {
        return 0;
    }
    PauliString acc(n_);
    for (int i = 0; i < n_; i++) {
        if (anticommute(&x_[(size_t)i * words_], &z_[(size_t)i * words_], p.x.data(), p.z.data(), words_)) {
            rowsum_into(acc, i + n_);
        }
    }
    return acc.negative == p.negative ? 1 : -1;
}

int StabilizerTableau::measure(const PauliString &p, Rng &rng) {
    int pivot = find_anticommuting_stabilizer(p);
    if (pivot < 0) {
        return peek(p);
    }
    bool flip = rng.next_u32() & 1;
    collapse(p, pivot, p.negative ^ flip);
    return flip ? -1 : 1;
}

double StabilizerTableau::force(const PauliString &p, int sign) {
    PauliString q = p;
    q.negative ^= sign < 0;
    int pivot = find_anticommuting_stabilizer(q);
    if (pivot >= 0) {
        collapse(q, pivot, q.negative);
        return -kLn2;
    }
    if (peek(q) != 1) {
        throw std::runtime_error("forced outcome has zero probability");
    }
    return 0;
}

void StabilizerTableau::apply_layer(const std::vector<Gate> &layer) {
    for (const Gate &g : layer) {
        require_clifford(g);
        double lp;
        if (g.is_zz()) {
            lp = force(PauliString::zz(n_, g.a, g.b), g.sign);
        } else {
            lp = force(PauliString::single_x(n_, g.a), 1);
        }
        // Norm of the projected state is sqrt(probability).
        log_weight_ += 0.5 * lp + g.log_scale;
    }
}

std::vector<int> StabilizerTableau::prefix_ranks(const std::vector<int> &perm) const {
    int cols = 2 * n_;
    int cw = words_for(cols);
    std::vector<uint64_t> m((size_t)n_ * cw, 0);
    for (int i = 0; i < n_; i++) {
        const uint64_t *xr = &x_[(size_t)(n_ + i) * words_];
        const uint64_t *zr = &z_[(size_t)(n_ + i) * words_];
        for (int k = 0; k < n_; k++) {
            int q = perm[k];
            uint64_t xb = (xr[q >> 6] >> (q & 63)) & 1;
            uint64_t zb = (zr[q >> 6] >> (q & 63)) & 1;
            m[(size_t)i * cw + ((2 * k) >> 6)] |= xb << ((2 * k) & 63);
            m[(size_t)i * cw + ((2 * k + 1) >> 6)] |= zb << ((2 * k + 1) & 63);
        }
    }
    std::vector<int> rank_after(cols, 0);
    int rank = 0;
    for (int c = 0; c < cols && rank < n_; c++) {
        int w = c >> 6;
        uint64_t bit = uint64_t{1} << (c & 63);
        int piv = -1;
        for (int i = rank; i < n_; i++) {
            if (m[(size_t)i * cw + w] & bit) {
                piv = i;
                break;
            }
        }
        if (piv >= 0) {
            if (piv != rank) {
                for (int k = 0; k < cw; k++) {
                    std::swap(m[(size_t)piv * cw + k], m[(size_t)rank * cw + k]);
                }
            }
            for (int i = piv + 1; i < n_; i++) {
                if (m[(size_t)i * cw + w] & bit) {
                    for (int k = w; k < cw; k++) {
                        m[(size_t)i * cw + k] ^= m[(size_t)rank * cw + k];
                    }
                }
            }
            rank++;
        }
        rank_after[c] = rank;
    }
    for (int c = 1; c < cols; c++) {
        rank_after[c] = std::max(rank_after[c], rank_after[c - 1]);
    }
    std::vector<int> out;
    for (int l = 1; l < n_; l++) {
        out.push_back(rank_after[2 * l - 1] - l);
    }
    return out;
}

std::vector<double> StabilizerTableau::entropies(int start, int len, const std::vector<double> &renyi) {
    std::vector<double> out(renyi.size(), 0.0);
    if (len <= 0 || len >= n_) {
        return out;
    }
    std::vector<int> perm(n_);
    for (int k = 0; k < n_; k++) {
        perm[k] = (((start + k) % n_) + n_) % n_;
    }
    double s = prefix_ranks(perm)[len - 1] * kLn2;
    for (auto &v : out) {
        v = s;
    }
    return out;
}

std::vector<std::vector<double>> StabilizerTableau::entropy_profile(const std::vector<double> &renyi) {
    std::vector<int> perm(n_);
    for (int k = 0; k < n_; k++) {
        perm[k] = k;
    }
    std::vector<std::vector<double>> out;
    for (int r : prefix_ranks(perm)) {
        out.emplace_back(renyi.size(), r * kLn2);
    }
    return out;
}

double StabilizerTableau::log_overlap_plus() const {
    StabilizerTableau t = *this;
    double lp = 0;
    for (int q = 0; q < n_; q++) {
        try {
            lp += t.force(PauliString::single_x(n_, q), 1);
        } catch (const std::runtime_error &) {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return 0.5 * lp;
}

double StabilizerTableau::capped_correlator(int a, int b) const {
    StabilizerTableau t = *this;
    for (int q = 0; q < n_; q++) {
        if (q == a || q == b) {
            continue;
        }
        try {
            t.force(PauliString::single_x(n_, q), 1);
        } catch (const std::runtime_error &) {
            throw std::runtime_error("state orthogonal to |+>: correlator undefined");
        }
    }
    // The remaining pair has X_a X_b = +1; its other stabilizer is +-Z_a Z_b
    // (C = +-1) or +-X_a (C = 0, or undefined when -1).
    int zz = t.peek(PauliString::zz(n_, a, b));
    if (zz != 0) {
        return zz;
    }
    if (t.peek(PauliString::single_x(n_, a)) != 1) {
        throw std::runtime_error("state orthogonal to |+>: correlator undefined");
    }
    return 0;
}

GhzClusterState::GhzClusterState(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("cluster state needs at least one qubit");
    }
    label_.resize(n_);
    pos_.assign(n_, 0);
    z_.assign(n_, 0);
    members_.resize(n_);
    x_negative_.assign(n_, 0);
    for (int q = 0; q < n_; q++) {
        label_[q] = q;
        members_[q] = {q};
    }
}

void GhzClusterState::force_zz(int a, int b, int sign) {
    int la = label_[a], lb = label_[b];
    bool want_odd = sign < 0;
    if (la == lb) {
        if ((bool)(z_[a] ^ z_[b]) != want_odd) {
            throw std::runtime_error("forced outcome has zero probability");
        }
        return;
    }
    log_weight_ -= 0.5 * kLn2;
    if (members_[la].size() < members_[lb].size()) {
        std::swap(la, lb);
        std::swap(a, b);
    }
    bool flip = (bool)(z_[a] ^ z_[b]) != want_odd;
    auto &big = members_[la];
    for (int q : members_[lb]) {
        if (flip) {
            z_[q] ^= 1;
        }
        label_[q] = la;
        pos_[q] = (int)big.size();
        big.push_back(q);
    }
    x_negative_[la] ^= x_negative_[lb];
    members_[lb].clear();
    x_negative_[lb] = 0;
    free_labels_.push_back(lb);
}

void GhzClusterState::force_x_plus(int q) {
    int l = label_[q];
    auto &mem = members_[l];
    if (mem.size() == 1) {
        if (x_negative_[l]) {
            throw std::runtime_error("forced outcome has zero probability");
        }
        return;
    }
    log_weight_ -= 0.5 * kLn2;
    int last = mem.back();
    mem[pos_[q]] = last;
    pos_[last] = pos_[q];
    mem.pop_back();
    int nl = free_labels_.back();
    free_labels_.pop_back();
    label_[q] = nl;
    pos_[q] = 0;
    z_[q] = 0;
    members_[nl] = {q};
    x_negative_[nl] = 0;
}

void GhzClusterState::apply_layer(const std::vector<Gate> &layer) {
    for (const Gate &g : layer) {
        require_clifford(g);
        if (g.is_zz()) {
            force_zz(g.a, g.b, g.sign);
        } else {
            force_x_plus(g.a);
        }
        log_weight_ += g.log_scale;
    }
}

std::vector<int> GhzClusterState::prefix_cut_counts() const {
    std::vector<int> diff(n_ + 1, 0);
    for (const auto &mem : members_) {
        if (mem.size() < 2) {
            continue;
        }
        int lo = n_, hi = -1;
        for (int q : mem) {
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        // Prefix [0, l) cuts the cluster for lo < l <= hi.
        diff[lo + 1]++;
        diff[hi + 1]--;
    }
    std::vector<int> out;
    int acc = diff[0];
    for (int l = 1; l < n_; l++) {
        acc += diff[l];
        out.push_back(acc);
    }
    return out;
}

std::vector<double> GhzClusterState::entropies(int start, int len, const std::vector<double> &renyi) {
    std::vector<double> out(renyi.size(), 0.0);
    if (len <= 0 || len >= n_) {
        return out;
    }
    int s = ((start % n_) + n_) % n_;
    std::vector<uint8_t> in(n_, 0);
    for (int k = 0; k < len; k++) {
        in[(s + k) % n_] = 1;
    }
    int cut = 0;
    for (const auto &mem : members_) {
        bool has_in = false, has_out = false;
        for (int q : mem) {
            (in[q] ? has_in : has_out) = true;
        }
        cut += has_in && has_out;
    }
    for (auto &v : out) {
        v = cut * kLn2;
    }
    return out;
}

std::vector<std::vector<double>> GhzClusterState::entropy_profile(const std::vector<double> &renyi) {
    std::vector<std::vector<double>> out;
    for (int c : prefix_cut_counts()) {
        out.emplace_back(renyi.size(), c * kLn2);
    }
    return out;
}

double GhzClusterState::log_overlap_plus() const {
    double lo = 0;
    for (size_t l = 0; l < members_.size(); l++) {
        if (members_[l].empty()) {
            continue;
        }
        if (x_negative_[l]) {
            return -std::numeric_limits<double>::infinity();
        }
        lo += 0.5 * (1.0 - (double)members_[l].size()) * kLn2;
    }
    return lo;
}

double GhzClusterState::capped_correlator(int a, int b) const {
    if (std::isinf(log_overlap_plus())) {
        throw std::runtime_error("state orthogonal to |+>: correlator undefined");
    }
    if (label_[a] != label_[b]) {
        return 0;
    }
    return (z_[a] ^ z_[b]) ? -1 : 1;
}

}  // namespace mipt
