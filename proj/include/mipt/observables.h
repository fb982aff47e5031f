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

#ifndef MIPT_OBSERVABLES_H
#define MIPT_OBSERVABLES_H

#include <cstdint>
#include <vector>

#include "mipt/backend.h"
#include "mipt/couplings.h"
#include "mipt/lattice.h"

namespace mipt {

/// Entropies are stored in nats; the domain-wall entropy in bits.
constexpr double kNatsPerBit = kLn2;

/// Chain of length L with lattice spacing 1.
struct ChordGeometry {
    int L;
    Boundary boundary;
};

/// Conformal distance of a cut at l, 0 < l < L.
///   periodic: (L/pi) sin(pi l / L), entering S = (c/3) ln R.
///   open:     (2L/pi) sin(pi l / L), entering S = (c/6) ln R.
double chord(int l, const ChordGeometry &geom);

/// Prefactor k in S = (c/k) ln R: 3 periodic, 6 open.
double chord_prefactor(Boundary b);

/// Entropy profile of one snapshot: s[i][j] = S_{renyi[j]}(cuts[i]) in nats.
struct EntropySample {
    uint64_t seed = 0;
    uint64_t sample_index = 0;
    int snapshot_row = 0;
    std::vector<int> cuts;
    std::vector<double> renyi;
    std::vector<std::vector<double>> s;

    /// S_n non-increasing in n at every cut, up to tol.
    bool renyi_monotone(double tol = 1e-10) const;
};

/// Takes entropies of the prefixes [0, l) for l in cuts from a backend.
EntropySample entropy_sample(Backend &b, const std::vector<int> &cuts, const std::vector<double> &renyi);

/// Binary entropy in bits of ((1 + C)/2, (1 - C)/2).
double domain_wall_entropy_bits(double c);

struct DomainWallSample {
    double c;
    double i_s_bits;
};

/// Boundary test-spin correlator of the final state of a surface-code
/// program, capped with <+| at the final time.
DomainWallSample domain_wall(const Backend &b, const CircuitProgram &prog);

struct FreeEnergySample {
    double minus_log_z;
    int L_x;
    int L_y;
    /// -ln Z per site.
    double density() const {
        return minus_log_z / ((double)L_x * L_y);
    }
};

FreeEnergySample casimir_sample(double log_z, const LatticeSpec &spec);

/// Cuts 1..L-1 in steps of stride, always including L/2; with
/// periodic symmetry only l <= L/2 is kept when fold is set.
std::vector<int> cut_list(int L, int stride, bool fold);

}  // namespace mipt

#endif
