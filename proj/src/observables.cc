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

#include "mipt/observables.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mipt/backend_clifford.h"
#include "mipt/backend_gaussian.h"

namespace mipt {

double chord(int l, const ChordGeometry &geom) {
    if (geom.L < 2 || l <= 0 || l >= geom.L) {
        throw std::invalid_argument("chord: cut " + std::to_string(l) + " outside (0, " + std::to_string(geom.L) +
                                    ")");
    }
    double s = std::sin(kPi * l / geom.L);
    return geom.boundary == Boundary::Periodic ? geom.L / kPi * s : 2.0 * geom.L / kPi * s;
}

double chord_prefactor(Boundary b) {
    return b == Boundary::Periodic ? 3.0 : 6.0;
}

bool EntropySample::renyi_monotone(double tol) const {
    std::vector<size_t> order(renyi.size());
    for (size_t j = 0; j < order.size(); j++) {
        order[j] = j;
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return renyi[a] < renyi[b]; });
    for (const auto &row : s) {
        for (size_t j = 1; j < order.size(); j++) {
            if (row[order[j]] > row[order[j - 1]] + tol) {
                return false;
            }
        }
    }
    return true;
}

EntropySample entropy_sample(Backend &b, const std::vector<int> &cuts, const std::vector<double> &renyi) {
    EntropySample out;
    out.cuts = cuts;
    out.renyi = renyi;
    if (auto *modes = dynamic_cast<MajoranaModes *>(&b)) {
        out.s = modes->prefix_entropies(cuts, renyi);
        return out;
    }
    if (auto *ghz = dynamic_cast<GhzClusterState *>(&b)) {
        auto counts = ghz->prefix_cut_counts();
        for (int l : cuts) {
            if (l <= 0 || l >= b.num_qubits()) {
                throw std::out_of_range("cut position out of range");
            }
            out.s.emplace_back(renyi.size(), counts[l - 1] * kLn2);
        }
        return out;
    }
    for (int l : cuts) {
        out.s.push_back(b.entropies(0, l, renyi));
    }
    return out;
}

double domain_wall_entropy_bits(double c) {
    double h = 0;
    for (double p : {(1 + c) / 2, (1 - c) / 2}) {
        if (p > 0) {
            h -= p * std::log2(p);
        }
    }
    return std::clamp(h, 0.0, 1.0);
}

DomainWallSample domain_wall(const Backend &b, const CircuitProgram &prog) {
    if (!prog.test_spins) {
        throw std::invalid_argument("domain_wall: program has no test spins (protocol must be surface-code)");
    }
    double c = b.capped_correlator(0, prog.n_qubits - 1);
    return {c, domain_wall_entropy_bits(c)};
}

FreeEnergySample casimir_sample(double log_z, const LatticeSpec &spec) {
    if (!std::isfinite(log_z)) {
        throw std::invalid_argument("casimir_sample: ln Z is not finite");
    }
    return {-log_z, spec.L_x, spec.L_y};
}

std::vector<int> cut_list(int L, int stride, bool fold) {
    if (stride < 1) {
        throw std::invalid_argument("cut stride must be >= 1");
    }
    if (L < 2) {
        throw std::invalid_argument("cut_list needs L >= 2");
    }
    int hi = fold ? L / 2 : L - 1;
    std::vector<int> cuts;
    for (int l = 1; l <= hi; l += stride) {
        cuts.push_back(l);
    }
    if (std::find(cuts.begin(), cuts.end(), L / 2) == cuts.end()) {
        cuts.push_back(L / 2);
        std::sort(cuts.begin(), cuts.end());
    }
    return cuts;
}

}  // namespace mipt
