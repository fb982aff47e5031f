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

#ifndef MIPT_BACKEND_MPS_H
#define MIPT_BACKEND_MPS_H

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "mipt/backend.h"

namespace mipt {

/// Real matrix-product state. Site k holds two matrices A[k][s], s = 0, 1 in
/// the Z basis, of shape D_k x D_{k+1} with D_0 = D_n = 1.
class MpsState : public Backend {
   public:
    MpsState(int n_qubits, double cutoff, int chi_max);

    BackendKind kind() const override {
        return BackendKind::Mps;
    }
    int num_qubits() const override {
        return n_;
    }

    void apply_layer(const std::vector<Gate> &layer) override;
    /// Full canonicalization sweep; records Schmidt values at every bond and
    /// moves the norm into log_weight.
    void end_row() override;

    double log_weight() const override {
        return log_weight_;
    }
    void set_log_weight(double w) override {
        log_weight_ = w;
    }

    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override;
    std::vector<std::vector<double>> entropy_profile(const std::vector<double> &renyi) override;

    double log_overlap_plus() const override;
    double capped_correlator(int a, int b) const override;

    /// Squared Schmidt coefficients (normalized) across the cut before site l.
    const std::vector<double> &schmidt_probs(int l);
    int bond_dim(int l) const;
    int max_bond_dim() const;
    /// Largest relative discarded weight of any single truncation so far.
    double max_discarded() const {
        return max_discarded_;
    }

   private:
    using Mat = Eigen::MatrixXd;

    void apply_x(const Gate &g);
    void apply_zz_layer(const std::vector<Gate> &gates);
    void apply_wrap(const Gate &g);
    void right_canonicalize();
    void left_canonicalize();
    void svd_sweep_right_to_left();
    int truncation_rank(const Eigen::VectorXd &s, int cut);
    void ensure_canonical();

    int n_;
    double cutoff_;
    int chi_max_;
    std::vector<std::array<Mat, 2>> a_;
    std::vector<std::vector<double>> schmidt_;
    bool canonical_ = false;
    double log_weight_ = 0;
    double max_discarded_ = 0;
};

}  // namespace mipt

#endif
