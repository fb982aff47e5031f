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

#ifndef MIPT_LATTICE_H
#define MIPT_LATTICE_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipt/rng.h"

namespace mipt {

enum class Boundary : uint8_t { Open = 0, Periodic = 1 };
enum class Protocol : uint8_t { Cat = 0, SurfaceCode = 1 };

std::string to_string(Boundary b);
std::string to_string(Protocol p);
Boundary parse_boundary(const std::string &s);
Protocol parse_protocol(const std::string &s);

/// L_x sites per row, L_y rows. Rows are joined by temporal bonds (open in y).
/// The surface-code protocol adds two test spins, each coupled to one boundary
/// column in every row.
struct LatticeSpec {
    int L_x = 2;
    int L_y = 1;
    Boundary boundary = Boundary::Open;
    Protocol protocol = Protocol::Cat;

    void validate() const;
    bool periodic() const {
        return boundary == Boundary::Periodic;
    }
    bool has_test_spins() const {
        return protocol == Protocol::SurfaceCode;
    }
    /// Spatial bond x joins (x, y) and (x + 1 mod L_x, y).
    int spatial_per_row() const {
        return periodic() ? L_x : L_x - 1;
    }
    int temporal_layers() const {
        return L_y - 1;
    }
    size_t num_spatial() const {
        return (size_t)spatial_per_row() * L_y;
    }
    size_t num_temporal() const {
        return (size_t)temporal_layers() * L_x;
    }
    size_t num_test() const {
        return has_test_spins() ? 2 * (size_t)L_y : 0;
    }
    size_t num_bonds() const {
        return num_spatial() + num_temporal() + num_test();
    }
    /// Lattice sites followed by the left and right test spins.
    size_t num_sites() const {
        return (size_t)L_x * L_y + (has_test_spins() ? 2 : 0);
    }
    size_t site(int x, int y) const {
        return (size_t)y * L_x + x;
    }
    size_t test_site(int side) const {
        return (size_t)L_x * L_y + side;
    }
    bool operator==(const LatticeSpec &other) const = default;
};

/// Bond flags indexed as: spatial[y * spatial_per_row + x],
/// temporal[y * L_x + x] for the bond between rows y and y + 1,
/// test[y * 2 + side] with side 0 = left (coupled to x = 0) and 1 = right.
struct DilutionMask {
    std::vector<uint8_t> spatial;
    std::vector<uint8_t> temporal;
    std::vector<uint8_t> test;

    size_t count() const;
    bool operator==(const DilutionMask &other) const = default;
};

/// Signs are +1 or -1 on measured bonds and 0 on unmeasured ones.
struct DisorderRealization {
    LatticeSpec spec;
    double p_meas = 1;
    double t = 0;
    uint64_t seed = 0;
    uint64_t index = 0;
    DilutionMask mask;
    std::vector<int8_t> spatial_sign;
    std::vector<int8_t> temporal_sign;
    std::vector<int8_t> test_sign;

    void validate() const;
    bool operator==(const DisorderRealization &other) const = default;
};

/// One entry per elementary loop: 0 or 1 for frustration when every bond on
/// the loop is measured, kUnconstrained otherwise. Loops are listed as the
/// square plaquettes (row-major, y then x), then for the surface-code
/// protocol the triangles closed by each test spin (left then right, by y),
/// then for periodic lattices the winding loop of every row.
struct VortexConfig {
    static constexpr int8_t kUnconstrained = 2;
    std::vector<int8_t> m;

    std::string key() const;
    bool operator==(const VortexConfig &other) const = default;
};

DilutionMask sample_dilution(const LatticeSpec &spec, double p_meas, Rng &rng);

/// Draws each measured sign independently with P(+1) = (1 + sin 2t)/2 and then
/// applies uniformly random site flips.
DisorderRealization sample_signs_nishimori(const LatticeSpec &spec, const DilutionMask &mask, double t, Rng &rng);

/// Full realization for (seed, index): dilution from the Dilution substream,
/// signs and gauge flips from the Signs substream.
DisorderRealization sample_realization(const LatticeSpec &spec, double t, double p_meas, uint64_t seed, uint64_t index);

/// flips has one entry per site (num_sites()).
DisorderRealization gauge_transform(const DisorderRealization &real, const std::vector<uint8_t> &flips);

DisorderRealization gauge_fix_temporal(const DisorderRealization &real);

bool is_temporal_gauge_fixed(const DisorderRealization &real);

VortexConfig vortices(const DisorderRealization &real);

void write_binary(std::ostream &out, const DisorderRealization &real);
DisorderRealization read_binary(std::istream &in);

/// One bond per line: "x y orientation measured sign", orientation one of
/// s (spatial), t (temporal), l/r (test spin, x is the lattice column).
void write_text(std::ostream &out, const DisorderRealization &real);

}  // namespace mipt

#endif
