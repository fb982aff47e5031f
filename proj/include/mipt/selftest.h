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

// Built-in consistency checks shared by the CLI selftest and acceptance runs.

#ifndef MIPT_SELFTEST_H
#define MIPT_SELFTEST_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipt/circuit.h"

namespace mipt {

/// One line of a pass/fail matrix: passed when value < tolerance.
struct CheckResult {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool passed = false;
    std::string detail;
};

/// Prints "PASS|FAIL name value < tolerance detail" lines; returns true when
/// every check passed.
bool print_checks(std::ostream &out, const std::vector<CheckResult> &checks);

/// Random lattice shape, point (t, p_meas) and realization drawn from
/// (seed, i). L_x + test spins <= max_qubits; t_fixed >= 0 pins t.
CircuitProgram random_program(uint64_t seed, uint64_t i, int max_qubits, double t_fixed = -1);

/// Largest deviations from the dense backend over random programs.
struct CrossBackendReport {
    int programs = 0;
    int clifford_programs = 0;
    /// max |S_n(dense) - S_n(other)| over every prefix cut and n in {1,2,3,inf}.
    double mps_entropy = 0;
    double gaussian_entropy = 0;
    double modes_entropy = 0;
    double clifford_entropy = 0;
    /// Relative ln Z deviations.
    double mps_log_z = 0;
    double gaussian_log_z = 0;
    double clifford_log_z = 0;
    /// max distance of Clifford S_n / ln 2 from an integer, and max |S_1 - S_2|.
    double clifford_integrality = 0;
    double clifford_flatness = 0;
};

/// n_programs generic-t programs and n_programs programs at t = pi/4.
CrossBackendReport cross_backend(int n_programs, int max_qubits, uint64_t seed, double mps_cutoff = 1e-20);
std::vector<CheckResult> cross_backend_checks(const CrossBackendReport &r);

/// Total-variation distance between the vortex histogram of n_samples
/// sampled realizations and born_enumerate. mutate is forwarded to
/// born_enumerate.
struct BornReport {
    double tv = 0;
    /// Expected TV from sampling noise alone, sum_k sqrt(p_k / (2 pi n)).
    double noise = 0;
    size_t configs = 0;
    bool impossible_sampled = false;
};
BornReport born_check(const LatticeSpec &spec, double t, double p_meas, uint64_t n_samples, uint64_t seed,
                      const std::function<void(CircuitProgram &)> &mutate = nullptr);

/// Flips the sign of the first ZZ gate of a program (fault injection).
void flip_first_zz_sign(CircuitProgram &prog);

/// Percolation spectrum derivatives against reference values.
std::vector<CheckResult> spectrum_checks();

}  // namespace mipt

#endif
