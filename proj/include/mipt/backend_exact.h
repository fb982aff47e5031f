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

#ifndef MIPT_BACKEND_EXACT_H
#define MIPT_BACKEND_EXACT_H

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mipt/circuit.h"

namespace mipt {

/// Real amplitude vector. Qubit q is bit (n - 1 - q) of the basis index, so a
/// prefix of qubits is the leading block of the index.
class DenseState {
   public:
    static constexpr int kDefaultMaxQubits = 14;

    explicit DenseState(int n_qubits, int max_qubits = kDefaultMaxQubits);

    int num_qubits() const {
        return n_;
    }
    const std::vector<double> &amplitudes() const {
        return amp_;
    }
    /// ln of the norm of the unnormalized evolved vector, including gate
    /// prefactors; the stored amplitudes stay normalized after each row.
    double log_weight() const {
        return log_weight_;
    }
    void set_log_weight(double w) {
        log_weight_ = w;
    }

    void apply_gate(const Gate &g);
    void apply_layer(const std::vector<Gate> &layer);
    /// Applies pre, zz and post, then renormalizes.
    void apply_row(const RowProgram &row);
    void normalize();

    /// Reduced-state eigenvalues of the arc of len qubits starting at start
    /// (wrapping mod n).
    std::vector<double> reduced_spectrum(int start, int len) const;
    double entropy(int start, int len, double renyi) const;
    /// Prefix cuts l = 1..n-1.
    std::vector<double> entropy_profile(double renyi) const;

    /// <+|psi> for the normalized state.
    double overlap_plus() const;
    /// <+| Z_a Z_b |psi> / <+|psi>.
    double capped_zz(int a, int b) const;

    void dump(std::ostream &out) const;

   private:
    int n_;
    std::vector<double> amp_;
    double log_weight_ = 0;
};

/// Evolves |+> through every row; log_weight starts at prog.init_log_weight.
DenseState evolve(const CircuitProgram &prog, int max_qubits = DenseState::kDefaultMaxQubits);

/// ln <+| prod M(y) |+> plus tracked prefactors: ln of the classical
/// partition function (with e^{beta} dropped per projective bond).
double log_partition(const CircuitProgram &prog, int max_qubits = DenseState::kDefaultMaxQubits);

/// Exact Born distribution over vortex configurations, keyed by
/// VortexConfig::key(), from enumeration of every dilution mask and sign
/// assignment weighted by P(mask) * Z(s) / sum_s Z(s).
/// mutate, when set, edits each compiled program before evaluation (used to
/// inject faults in self-checks).
std::map<std::string, double> born_enumerate(const LatticeSpec &spec, double t, double p_meas, int max_bonds = 20,
                                             const std::function<void(CircuitProgram &)> &mutate = nullptr);

}  // namespace mipt

#endif
