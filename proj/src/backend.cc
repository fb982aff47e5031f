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

#include "mipt/backend.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mipt/backend_clifford.h"
#include "mipt/backend_exact.h"
#include "mipt/backend_gaussian.h"
#include "mipt/backend_mps.h"
#include "mipt/spectra.h"

namespace mipt {

namespace {

class ExactBackend : public Backend {
   public:
    ExactBackend(int n, int max_qubits) : st_(n, max_qubits) {}

    BackendKind kind() const override {
        return BackendKind::Exact;
    }
    int num_qubits() const override {
        return st_.num_qubits();
    }
    void apply_layer(const std::vector<Gate> &layer) override {
        st_.apply_layer(layer);
    }
    void end_row() override {
        st_.normalize();
    }
    double log_weight() const override {
        return st_.log_weight();
    }
    void set_log_weight(double w) override {
        st_.set_log_weight(w);
    }
    std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) override {
        auto p = st_.reduced_spectrum(start, len);
        std::vector<double> out;
        for (double n : renyi) {
            out.push_back(renyi_from_probs(p, n));
        }
        return out;
    }
    double log_overlap_plus() const override {
        double ov = st_.overlap_plus();
        return ov > 0 ? std::log(ov) : -std::numeric_limits<double>::infinity();
    }
    double capped_correlator(int a, int b) const override {
        return st_.capped_zz(a, b);
    }

   private:
    DenseState st_;
};

}  // namespace

std::string to_string(BackendKind k) {
    switch (k) {
        case BackendKind::Exact:
            return "exact";
        case BackendKind::Mps:
            return "mps";
        case BackendKind::Clifford:
            return "clifford";
        case BackendKind::Gaussian:
            return "gaussian";
    }
    return "?";
}

BackendKind parse_backend(const std::string &s) {
    if (s == "exact") {
        return BackendKind::Exact;
    }
    if (s == "mps") {
        return BackendKind::Mps;
    }
    if (s == "clifford") {
        return BackendKind::Clifford;
    }
    if (s == "gaussian") {
        return BackendKind::Gaussian;
    }
    throw std::invalid_argument("unknown backend '" + s + "' (expected exact|mps|clifford|gaussian)");
}

void Backend::apply_row(const RowProgram &row) {
    apply_layer(row.pre);
    apply_layer(row.zz);
    apply_layer(row.post);
    end_row();
}

std::vector<std::vector<double>> Backend::entropy_profile(const std::vector<double> &renyi) {
    std::vector<std::vector<double>> out;
    for (int l = 1; l < num_qubits(); l++) {
        out.push_back(entropies(0, l, renyi));
    }
    return out;
}

std::unique_ptr<Backend> make_backend(BackendKind kind, const CircuitProgram &header, const BackendOptions &opt) {
    int n = header.n_qubits;
    switch (kind) {
        case BackendKind::Exact:
            return std::make_unique<ExactBackend>(n, opt.dense_max_qubits);
        case BackendKind::Mps:
            return std::make_unique<MpsState>(n, opt.mps_cutoff, opt.mps_chi_max);
        case BackendKind::Clifford:
            if (!std::isinf(header.couplings.beta)) {
                throw std::invalid_argument("backend clifford requires t = pi/4");
            }
            if (opt.clifford_engine == CliffordEngine::Clusters) {
                return std::make_unique<GhzClusterState>(n);
            }
            return std::make_unique<StabilizerTableau>(n);
        case BackendKind::Gaussian:
            if (opt.gaussian_engine == GaussianEngine::Modes) {
                return std::make_unique<MajoranaModes>(n, opt.gaussian_orthonormalize_rows);
            }
            return std::make_unique<MajoranaState>(n, opt.gaussian_stabilize_every);
    }
    throw std::invalid_argument("unknown backend");
}

std::unique_ptr<Backend> run_program(BackendKind kind, const CircuitProgram &prog, const BackendOptions &opt) {
    auto b = make_backend(kind, prog, opt);
    b->set_log_weight(prog.init_log_weight);
    for (const auto &row : prog.rows) {
        b->apply_row(row);
    }
    return b;
}

double log_partition(BackendKind kind, const CircuitProgram &prog, const BackendOptions &opt) {
    auto b = run_program(kind, prog, opt);
    double lo = b->log_overlap_plus();
    if (std::isinf(lo)) {
        throw std::runtime_error("final state orthogonal to |+>");
    }
    return b->log_weight() + lo;
}

}  // namespace mipt
