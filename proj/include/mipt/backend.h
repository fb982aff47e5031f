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

#ifndef MIPT_BACKEND_H
#define MIPT_BACKEND_H

#include <memory>
#include <string>
#include <vector>

#include "mipt/circuit.h"

namespace mipt {

enum class BackendKind : uint8_t { Exact, Mps, Clifford, Gaussian };

std::string to_string(BackendKind k);
BackendKind parse_backend(const std::string &s);

enum class GaussianEngine : uint8_t {
    /// Covariance matrix; tracks log weights and supports every query.
    Covariance,
    /// Mode matrix; entropies only, cheaper per gate for large chains.
    Modes,
};

enum class CliffordEngine : uint8_t {
    /// General stabilizer tableau.
    Tableau,
    /// GHZ-partition engine, exact for projective ZZ / X circuits on |+>.
    Clusters,
};

struct BackendOptions {
    int dense_max_qubits = 14;
    double mps_cutoff = 1e-20;
    int mps_chi_max = 1024;
    CliffordEngine clifford_engine = CliffordEngine::Tableau;
    GaussianEngine gaussian_engine = GaussianEngine::Covariance;
    int gaussian_stabilize_every = 100;
    int gaussian_orthonormalize_rows = 2;
};

/// A state of the (1+1)D chain evolved by compiled gates. All entropies are
/// in nats. Arcs are [start, start + len) taken mod num_qubits().
class Backend {
   public:
    virtual ~Backend() = default;

    virtual BackendKind kind() const = 0;
    virtual int num_qubits() const = 0;

    virtual void apply_layer(const std::vector<Gate> &layer) = 0;
    /// Restores the normalized/canonical form after a batch of layers.
    virtual void end_row() = 0;
    void apply_row(const RowProgram &row);

    /// ln of the norm of the unnormalized evolved state including gate
    /// prefactors. NaN for engines that do not track it.
    virtual double log_weight() const = 0;
    virtual void set_log_weight(double w) = 0;

    /// S_n of the arc for each requested Renyi index.
    virtual std::vector<double> entropies(int start, int len, const std::vector<double> &renyi) = 0;
    /// out[l - 1][i] = S_{renyi[i]} of the prefix [0, l) for l = 1..n-1.
    virtual std::vector<std::vector<double>> entropy_profile(const std::vector<double> &renyi);

    /// ln <+|psi> for the normalized state; -inf when orthogonal.
    virtual double log_overlap_plus() const = 0;
    /// <+| Z_a Z_b |psi> / <+|psi>.
    virtual double capped_correlator(int a, int b) const = 0;
};

std::unique_ptr<Backend> make_backend(BackendKind kind, const CircuitProgram &header, const BackendOptions &opt);

/// Runs every row of prog from |+> and returns the final state.
std::unique_ptr<Backend> run_program(BackendKind kind, const CircuitProgram &prog, const BackendOptions &opt);

/// log_weight + log_overlap_plus after running prog: ln Z.
double log_partition(BackendKind kind, const CircuitProgram &prog, const BackendOptions &opt);

}  // namespace mipt

#endif
