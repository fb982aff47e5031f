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

#ifndef MIPT_CIRCUIT_H
#define MIPT_CIRCUIT_H

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipt/couplings.h"
#include "mipt/lattice.h"
#include "mipt/rng.h"

namespace mipt {

enum class GateKind : uint8_t { WeakZZ, WeakX, ProjXPlus, TestSpinZZ };

std::string to_string(GateKind k);

/// A non-unitary gate on qubits of the (1+1)D chain.
///   WeakZZ / TestSpinZZ: exp(coeff * sign * Z_a Z_b); coeff = +inf is the
///     projector (1 + sign Z_a Z_b)/2.
///   WeakX: exp(coeff * X_a), coeff finite and positive.
///   ProjXPlus: (1 + X_a)/2.
/// log_scale is a positive scalar prefactor (natural log) multiplying the
/// operator so that the product of all gates reproduces the classical
/// transfer matrix exactly.
struct Gate {
    GateKind kind;
    int a;
    int b;
    int8_t sign;
    double coeff;
    double log_scale;

    bool is_zz() const {
        return kind == GateKind::WeakZZ || kind == GateKind::TestSpinZZ;
    }
    bool is_projective() const {
        return kind == GateKind::ProjXPlus || (is_zz() && std::isinf(coeff));
    }
    bool operator==(const Gate &other) const = default;
};

/// One transfer-matrix slice: half of the temporal layer below, the ZZ layer
/// of row y, half of the temporal layer above.
struct RowProgram {
    int y = 0;
    std::vector<Gate> pre;
    std::vector<Gate> zz;
    std::vector<Gate> post;

    size_t size() const {
        return pre.size() + zz.size() + post.size();
    }
    bool operator==(const RowProgram &other) const = default;
};

/// Qubit layout: with test spins, qubit 0 is the left test spin, qubits
/// 1..L_x the lattice columns and qubit L_x + 1 the right test spin.
/// Without test spins qubit x is column x.
struct CircuitProgram {
    LatticeSpec spec;
    double t = 0;
    double p_meas = 1;
    DualCouplings couplings{0, 0};
    int n_qubits = 0;
    int lattice_offset = 0;
    bool periodic = false;
    bool test_spins = false;
    /// ln of the prefactor relating <+|prod M(y)|+> to the partition function.
    double init_log_weight = 0;
    /// True when the program ends with the overlap onto <+| (partition
    /// function); false for open-ended steady-state sampling.
    bool terminal_cap = true;
    std::vector<RowProgram> rows;

    size_t gate_count() const;
    bool operator==(const CircuitProgram &other) const = default;
};

/// Everything except the rows; rows can then be produced one at a time.
CircuitProgram program_header(const LatticeSpec &spec, double t, double p_meas);

/// Compiles row y of a temporal-gauge-fixed realization.
RowProgram compile_row(const CircuitProgram &header, const DisorderRealization &real, int y);

/// Whole program. Rejects realizations that are not temporal-gauge-fixed.
CircuitProgram compile(const LatticeSpec &spec, double t, double p_meas, const DisorderRealization &real);

/// Inserts the test-spin couplings of the realization into every row.
/// compile() calls this for the surface-code protocol.
void attach_test_spins(CircuitProgram &prog, const DisorderRealization &real);

/// Replaces post(y) and pre(y + 1) by one layer (X exponents add, projectors
/// absorb). Valid when no observable is read between the two rows.
std::vector<Gate> fuse_x_layers(const std::vector<Gate> &post, const std::vector<Gate> &pre);

enum class SignModel : uint8_t {
    /// Independent signs with P(+1) = (1 + sin 2t)/2.
    Nishimori,
    /// Every measured bond +1 (post-selected).
    Clean,
};

SignModel parse_sign_model(const std::string &s);
std::string to_string(SignModel m);

/// Bonds of one row as drawn, before gauge fixing. temporal[x] joins (x, y)
/// to (x, y + 1); it is empty for the last row.
struct RawRow {
    std::vector<uint8_t> spatial_mask;
    std::vector<int8_t> spatial_sign;
    std::vector<uint8_t> temporal_mask;
    std::vector<int8_t> temporal_sign;
};

/// Samples and compiles a cat-protocol lattice one row at a time, for runs
/// too long to hold a whole realization. Temporal signs are removed by a
/// running gauge that is pushed onto the spatial signs of later rows.
/// Deterministic in (seed, index).
class RowStream {
   public:
    RowStream(const LatticeSpec &spec, double t, double p_meas, SignModel model, uint64_t seed, uint64_t index);

    const CircuitProgram &header() const {
        return header_;
    }
    /// Next row; with last set the upper half layer is the uniform cap.
    RowProgram next(bool last = false);
    int rows_emitted() const {
        return y_;
    }
    const RawRow &last_row() const {
        return raw_;
    }

   private:
    int8_t draw_sign();

    CircuitProgram header_;
    SignModel model_;
    double q_plus_;
    Rng dilution_;
    Rng signs_;
    int y_ = 0;
    std::vector<int8_t> flip_;
    std::vector<uint8_t> prev_temporal_;
    RawRow raw_;
};

/// One gate per line: "y kind x sign strength". x is the first qubit.
void write_dump(std::ostream &out, const CircuitProgram &prog);

}  // namespace mipt

#endif
