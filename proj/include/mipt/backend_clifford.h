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

#ifndef MIPT_BACKEND_CLIFFORD_H
#define MIPT_BACKEND_CLIFFORD_H

#include <cstdint>
#include <vector>

#include "mipt/backend.h"
#include "mipt/rng.h"

namespace mipt {

/// Pauli string on n qubits as packed X and Z bit planes plus a sign bit.
struct PauliString {
    std::vector<uint64_t> x;
    std::vector<uint64_t> z;
    bool negative = false;

    explicit PauliString(int n = 0);
    static PauliString single_x(int n, int q);
    static PauliString zz(int n, int a, int b);
    bool get_x(int q) const {
        return (x[q >> 6] >> (q & 63)) & 1;
    }
    bool get_z(int q) const {
        return (z[q >> 6] >> (q & 63)) & 1;
    }
    void set(int q, bool xb, bool zb);
    bool commutes_with(const PauliString &other) const;
};

/// Stabilizer tableau with destabilizers (Aaronson-Gottesman). Rows 0..n-1
/// are destabilizers, rows n..2n-1 stabilizers. Starts in |+>^n.
class StabilizerTableau : public Backend {
   public:
    explicit StabilizerTableau(int n_qubits);

    BackendKind kind() const override {
        return BackendKind::Clifford;
    }
    int num_qubits() const override {
        return n_;
    }

    /// Born-rule measurement: returns +1 or -1, uniform when random.
    int measure(const PauliString &p, Rng &rng);
    /// Projects onto the +1 eigenspace of sign * p. Returns ln of the
    /// probability of that outcome (0 or -ln 2); throws when it is impossible.
    double force(const PauliString &p, int sign);
    /// Outcome of p if it is determined by the state, 0 if random.
    int peek(const PauliString &p) const;

    void apply_layer(const std::vector<Gate> &layer) override;
    void end_row() override {}

    double log_weight() const override {
        return log_weight_;
    }
    void set_log_weight(double w) override {
        log_weight_ = w;
    }

    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override;
    std::vector<std::vector<double>> entropy_profile(const std::vector<double> &renyi) override;
    /// Entanglement entropy in units of ln 2 of every prefix of the qubit
    /// order given by perm: out[l - 1] for the first l qubits, l = 1..n-1.
    std::vector<int> prefix_ranks(const std::vector<int> &perm) const;

    double log_overlap_plus() const override;
    double capped_correlator(int a, int b) const override;

    /// The stabilizer generators (rows n..2n-1).
    std::vector<PauliString> stabilizers() const;

   private:
    PauliString row(int i) const;
    void rowsum(int h, int i);
    void rowsum_into(PauliString &h, int i) const;
    int find_anticommuting_stabilizer(const PauliString &p) const;
    void collapse(const PauliString &p, int pivot, bool negative);

    int n_;
    int words_;
    // Row-major: row i occupies [i * words_, (i + 1) * words_).
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    std::vector<uint8_t> r_;
    double log_weight_ = 0;
};

/// Specialized exact engine for circuits of projective ZZ and X measurements
/// on |+>^n: the state is always a product of GHZ states on a partition of
/// the qubits, so each measurement is a merge or a split. Relative Z signs
/// inside clusters and the X sign of each cluster are tracked so forced
/// outcomes, log weights and capped correlators stay exact.
class GhzClusterState : public Backend {
   public:
    explicit GhzClusterState(int n_qubits);

    BackendKind kind() const override {
        return BackendKind::Clifford;
    }
    int num_qubits() const override {
        return n_;
    }

    void apply_layer(const std::vector<Gate> &layer) override;
    void end_row() override {}

    double log_weight() const override {
        return log_weight_;
    }
    void set_log_weight(double w) override {
        log_weight_ = w;
    }

    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override;
    std::vector<std::vector<double>> entropy_profile(const std::vector<double> &renyi) override;
    /// Number of clusters cut by each prefix [0, l), l = 1..n-1.
    std::vector<int> prefix_cut_counts() const;

    double log_overlap_plus() const override;
    double capped_correlator(int a, int b) const override;

    int cluster_of(int q) const {
        return label_[q];
    }

   private:
    void force_zz(int a, int b, int sign);
    void force_x_plus(int q);

    int n_;
    std::vector<int> label_;
    std::vector<int> pos_;    // index of the qubit within its member list
    std::vector<uint8_t> z_;  // Z_i Z_j = (-1)^(z_i ^ z_j) inside a cluster
    std::vector<std::vector<int>> members_;
    std::vector<uint8_t> x_negative_;  // per cluster label: prod X = -1
    std::vector<int> free_labels_;
    double log_weight_ = 0;
};

}  // namespace mipt

#endif
