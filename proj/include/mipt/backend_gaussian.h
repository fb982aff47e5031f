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

#ifndef MIPT_BACKEND_GAUSSIAN_H
#define MIPT_BACKEND_GAUSSIAN_H

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>

#include "mipt/backend.h"

namespace mipt {

/// Jordan-Wigner dictionary used by both Gaussian engines. Qubit q owns
/// Majoranas 2q and 2q + 1:
///   X_q         = -i g_{2q} g_{2q+1}
///   Z_q Z_{q+1} = -i g_{2q+1} g_{2q+2}
///   Z_{n-1} Z_0 = -i g_0 g_{2n-1}  (in the sector prod_q X_q = +1)
/// A gate exp(c s Z Z) or exp(c X) is exp((theta/2) h) with h = -i g_a g_b
/// and theta = 2 c s.
struct MajoranaPair {
    int a;
    int b;
    double theta;  // +inf for a projector onto h = +1
};
MajoranaPair majorana_pair(const Gate &g, int n_qubits);

/// Pfaffian of a real antisymmetric matrix (Parlett-Reid with pivoting).
double pfaffian(Eigen::MatrixXd m);

/// Covariance-matrix representation: Gamma_ab = <-i g_a g_b>, a real
/// antisymmetric 2n x 2n matrix with Gamma^2 = -1 for pure states.
class MajoranaState : public Backend {
   public:
    MajoranaState(int n_qubits, int stabilize_every = 100);
    static MajoranaState from_covariance(const Eigen::MatrixXd &gamma, int stabilize_every = 100);

    BackendKind kind() const override {
        return BackendKind::Gaussian;
    }
    int num_qubits() const override {
        return n_;
    }
    const Eigen::MatrixXd &covariance() const {
        return gamma_;
    }

    /// exp((theta/2)(-i g_a g_b)) followed by renormalization.
    void apply_weight(int a, int b, double theta);
    /// Projector (1 - i g_a g_b)/2; throws when its probability is below 1e-14.
    void apply_projector(int a, int b);
    void apply_layer(const std::vector<Gate> &layer) override;
    void end_row() override {}
    /// Re-antisymmetrizes and pulls Gamma back onto Gamma^2 = -1.
    void stabilize();
    /// max |Gamma Gamma^T - 1|.
    double purity_error() const;

    double log_weight() const override {
        return log_weight_;
    }
    void set_log_weight(double w) override {
        log_weight_ = w;
    }

    /// Singular values nu_k (one per mode) of the arc's covariance block.
    std::vector<double> interval_nu(int start, int len) const;
    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override;

    double log_overlap_plus() const override;
    double capped_correlator(int a, int b) const override;

    /// Row-major 8-byte reals after a header (magic, n, parity, row index).
    void write_checkpoint(std::ostream &out, int64_t row_index) const;
    static std::pair<MajoranaState, int64_t> read_checkpoint(std::istream &in);

   private:
    int n_;
    int stabilize_every_;
    int since_stabilize_ = 0;
    Eigen::MatrixXd gamma_;
    double log_weight_ = 0;
};

/// Mode-matrix representation: the state is annihilated by the n operators
/// c_k = sum_j W_kj g_j. Gates act on two columns; rows are re-orthonormalized
/// every few rows, and sooner when strong gates have amplified a column. Log
/// weights are not tracked.
class MajoranaModes : public Backend {
   public:
    MajoranaModes(int n_qubits, int orthonormalize_rows = 2);

    BackendKind kind() const override {
        return BackendKind::Gaussian;
    }
    int num_qubits() const override {
        return n_;
    }

    void apply_weight(int a, int b, double theta);
    void apply_projector(int a, int b);
    void apply_layer(const std::vector<Gate> &layer) override;
    void end_row() override;
    void orthonormalize();

    double log_weight() const override;
    void set_log_weight(double) override {}

    /// Gamma of the current state (orthonormalizes first).
    Eigen::MatrixXd covariance();

    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override;
    std::vector<std::vector<double>> entropy_profile(const std::vector<double> &renyi) override;
    /// S_n for prefixes [0, l) with l in cuts; out[i][j] for cuts[i], renyi[j].
    std::vector<std::vector<double>> prefix_entropies(const std::vector<int> &cuts, const std::vector<double> &renyi);

    double log_overlap_plus() const override;
    double capped_correlator(int a, int b) const override;

   private:
    int n_;
    int orthonormalize_rows_;
    int rows_since_ = 0;
    bool orthonormal_ = true;
    Eigen::MatrixXcd w_;
    /// Bound on ln of the amplification of each Majorana column since the
    /// last orthonormalization.
    std::vector<double> growth_;
};

/// Entanglement spectrum helper shared by both engines.
std::vector<double> covariance_block_nu(const Eigen::MatrixXd &gamma_block);

}  // namespace mipt

#endif
