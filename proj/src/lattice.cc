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

#include "mipt/lattice.h"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "mipt/couplings.h"

namespace mipt {

std::string to_string(Boundary b) {
    return b == Boundary::Periodic ? "periodic" : "open";
}

std::string to_string(Protocol p) {
    return p == Protocol::SurfaceCode ? "surface-code" : "cat";
}

Boundary parse_boundary(const std::string &s) {
    if (s == "open") {
        return Boundary::Open;
    }
    if (s == "periodic") {
        return Boundary::Periodic;
    }
    throw std::invalid_argument("unknown boundary '" + s + "' (expected open|periodic)");
}

Protocol parse_protocol(const std::string &s) {
    if (s == "cat") {
        return Protocol::Cat;
    }
    if (s == "surface-code") {
        return Protocol::SurfaceCode;
    }
    throw std::invalid_argument("unknown protocol '" + s + "' (expected cat|surface-code)");
}

void LatticeSpec::validate() const {
    if (L_x < 2) {
        throw std::invalid_argument("L_x must be at least 2");
    }
    if (L_y < 1) {
        throw std::invalid_argument("L_y must be at least 1");
    }
    if (has_test_spins() && periodic()) {
        throw std::invalid_argument("surface-code protocol requires an open x boundary");
    }
}

size_t DilutionMask::count() const {
    size_t n = 0;
    for (auto *v : {&spatial, &temporal, &test}) {
        for (uint8_t b : *v) {
            n += b != 0;
        }
    }
    return n;
}

void DisorderRealization::validate() const {
    spec.validate();
    if (mask.spatial.size() != spec.num_spatial() || mask.temporal.size() != spec.num_temporal() ||
        mask.test.size() != spec.num_test()) {
        throw std::invalid_argument("dilution mask shape does not match lattice");
    }
    auto check = [](const std::vector<uint8_t> &m, const std::vector<int8_t> &s, const char *what) {
        if (m.size() != s.size()) {
            throw std::invalid_argument(std::string(what) + " sign array shape does not match mask");
        }
        for (size_t k = 0; k < m.size(); k++) {
            bool ok = m[k] ? (s[k] == 1 || s[k] == -1) : s[k] == 0;
            if (!ok) {
                throw std::invalid_argument(std::string(what) + " bond " + std::to_string(k) +
                                            " has a sign inconsistent with its mask");
            }
        }
    };
    check(mask.spatial, spatial_sign, "spatial");
    check(mask.temporal, temporal_sign, "temporal");
    check(mask.test, test_sign, "test");
}

std::string VortexConfig::key() const {
    std::string s(m.size(), '0');
    for (size_t k = 0; k < m.size(); k++) {
        s[k] = m[k] == kUnconstrained ? 'u' : (char)('0' + m[k]);
    }
    return s;
}

DilutionMask sample_dilution(const LatticeSpec &spec, double p_meas, Rng &rng) {
    spec.validate();
    if (!(p_meas >= 0 && p_meas <= 1)) {
        throw std::invalid_argument("p_meas must lie in [0, 1]");
    }
    DilutionMask mask;
    auto fill = [&](std::vector<uint8_t> &v, size_t n) {
        v.resize(n);
        for (auto &b : v) {
            b = rng.bernoulli(p_meas);
        }
    };
    fill(mask.spatial, spec.num_spatial());
    fill(mask.temporal, spec.num_temporal());
    fill(mask.test, spec.num_test());
    return mask;
}

DisorderRealization sample_signs_nishimori(const LatticeSpec &spec, const DilutionMask &mask, double t, Rng &rng) {
    if (!(t > 0)) {
        throw std::invalid_argument("t must be positive for Nishimori sampling");
    }
    double q = prob_plus(t);
    DisorderRealization real;
    real.spec = spec;
    real.t = t;
    real.mask = mask;
    auto draw = [&](const std::vector<uint8_t> &m, std::vector<int8_t> &s) {
        s.assign(m.size(), 0);
        for (size_t k = 0; k < m.size(); k++) {
            if (m[k]) {
                s[k] = rng.bernoulli(q) ? 1 : -1;
            }
        }
    };
    draw(mask.spatial, real.spatial_sign);
    draw(mask.temporal, real.temporal_sign);
    draw(mask.test, real.test_sign);
    real.validate();

    std::vector<uint8_t> flips(spec.num_sites());
    uint32_t bits = 0;
    for (size_t k = 0; k < flips.size(); k++) {
        if (k % 32 == 0) {
            bits = rng.next_u32();
        }
        flips[k] = (bits >> (k % 32)) & 1;
    }
    return gauge_transform(real, flips);
}

DisorderRealization sample_realization(const LatticeSpec &spec, double t, double p_meas, uint64_t seed, uint64_t index) {
    Rng dilution_rng(seed, index, Purpose::Dilution);
    Rng sign_rng(seed, index, Purpose::Signs);
    DilutionMask mask = sample_dilution(spec, p_meas, dilution_rng);
    DisorderRealization real = sample_signs_nishimori(spec, mask, t, sign_rng);
    real.p_meas = p_meas;
    real.seed = seed;
    real.index = index;
    return real;
}

DisorderRealization gauge_transform(const DisorderRealization &real, const std::vector<uint8_t> &flips) {
    const LatticeSpec &s = real.spec;
    if (flips.size() != s.num_sites()) {
        throw std::invalid_argument("flip vector must have one entry per site");
    }
    DisorderRealization out = real;
    int nsp = s.spatial_per_row();
    for (int y = 0; y < s.L_y; y++) {
        for (int x = 0; x < nsp; x++) {
            size_t k = (size_t)y * nsp + x;
            if (flips[s.site(x, y)] != flips[s.site((x + 1) % s.L_x, y)]) {
                out.spatial_sign[k] = (int8_t)-out.spatial_sign[k];
            }
        }
    }
    for (int y = 0; y + 1 < s.L_y; y++) {
        for (int x = 0; x < s.L_x; x++) {
            size_t k = (size_t)y * s.L_x + x;
            if (flips[s.site(x, y)] != flips[s.site(x, y + 1)]) {
                out.temporal_sign[k] = (int8_t)-out.temporal_sign[k];
            }
        }
    }
    if (s.has_test_spins()) {
        for (int y = 0; y < s.L_y; y++) {
            for (int side = 0; side < 2; side++) {
                int col = side == 0 ? 0 : s.L_x - 1;
                size_t k = (size_t)y * 2 + side;
                if (flips[s.test_site(side)] != flips[s.site(col, y)]) {
                    out.test_sign[k] = (int8_t)-out.test_sign[k];
                }
            }
        }
    }
    return out;
}

DisorderRealization gauge_fix_temporal(const DisorderRealization &real) {
    const LatticeSpec &s = real.spec;
    std::vector<uint8_t> flips(s.num_sites(), 0);
    for (int y = 0; y + 1 < s.L_y; y++) {
        for (int x = 0; x < s.L_x; x++) {
            int8_t sign = real.temporal_sign[(size_t)y * s.L_x + x];
            uint8_t f = flips[s.site(x, y)];
            flips[s.site(x, y + 1)] = sign == -1 ? (uint8_t)(f ^ 1) : f;
        }
    }
    return gauge_transform(real, flips);
}

bool is_temporal_gauge_fixed(const DisorderRealization &real) {
    for (int8_t v : real.temporal_sign) {
        if (v == -1) {
            return false;
        }
    }
    return true;
}

VortexConfig vortices(const DisorderRealization &real) {
    const LatticeSpec &s = real.spec;
    VortexConfig out;
    auto loop = [&](std::initializer_list<int8_t> signs) {
        int prod = 1;
        for (int8_t v : signs) {
            if (v == 0) {
                out.m.push_back(VortexConfig::kUnconstrained);
                return;
            }
            prod *= v;
        }
        out.m.push_back(prod == 1 ? 0 : 1);
    };
    int nsp = s.spatial_per_row();
    int npx = s.periodic() ? s.L_x : s.L_x - 1;
    for (int y = 0; y + 1 < s.L_y; y++) {
        for (int x = 0; x < npx; x++) {
            loop({real.spatial_sign[(size_t)y * nsp + x], real.spatial_sign[(size_t)(y + 1) * nsp + x],
                  real.temporal_sign[(size_t)y * s.L_x + x],
                  real.temporal_sign[(size_t)y * s.L_x + (x + 1) % s.L_x]});
        }
    }
    if (s.has_test_spins()) {
        for (int side = 0; side < 2; side++) {
            int col = side == 0 ? 0 : s.L_x - 1;
            for (int y = 0; y + 1 < s.L_y; y++) {
                loop({real.test_sign[(size_t)y * 2 + side], real.test_sign[(size_t)(y + 1) * 2 + side],
                      real.temporal_sign[(size_t)y * s.L_x + col]});
            }
        }
    }
    if (s.periodic()) {
        for (int y = 0; y < s.L_y; y++) {
            int prod = 1;
            bool constrained = true;
            for (int x = 0; x < nsp; x++) {
                int8_t v = real.spatial_sign[(size_t)y * nsp + x];
                constrained &= v != 0;
                prod *= v == 0 ? 1 : v;
            }
            out.m.push_back(constrained ? (prod == 1 ? 0 : 1) : VortexConfig::kUnconstrained);
        }
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'M', 'I', 'P', 'T', 'R', 'L', '0', '1'};

template <typename T>
void put(std::ostream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    T v;
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!in) {
        throw std::runtime_error("truncated realization record");
    }
    return v;
}

}  // namespace

void write_binary(std::ostream &out, const DisorderRealization &real) {
    real.validate();
    out.write(kMagic, 8);
    put<int32_t>(out, real.spec.L_x);
    put<int32_t>(out, real.spec.L_y);
    put<uint8_t>(out, (uint8_t)real.spec.boundary);
    put<uint8_t>(out, (uint8_t)real.spec.protocol);
    put<uint16_t>(out, 0);
    put<double>(out, real.p_meas);
    put<double>(out, real.t);
    put<uint64_t>(out, real.seed);
    put<uint64_t>(out, real.index);

    std::vector<uint8_t> mask_bits, sign_bits;
    for (auto [m, sg] : {std::pair{&real.mask.spatial, &real.spatial_sign},
                         std::pair{&real.mask.temporal, &real.temporal_sign},
                         std::pair{&real.mask.test, &real.test_sign}}) {
        for (size_t k = 0; k < m->size(); k++) {
            mask_bits.push_back((*m)[k]);
            sign_bits.push_back((*sg)[k] == -1);
        }
    }
    auto pack = [&](const std::vector<uint8_t> &bits) {
        std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
        for (size_t k = 0; k < bits.size(); k++) {
            bytes[k / 8] |= (uint8_t)(bits[k] << (k % 8));
        }
        out.write(reinterpret_cast<const char *>(bytes.data()), (std::streamsize)bytes.size());
    };
    pack(mask_bits);
    pack(sign_bits);
}

DisorderRealization read_binary(std::istream &in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("not a realization record");
    }
    DisorderRealization real;
    real.spec.L_x = get<int32_t>(in);
    real.spec.L_y = get<int32_t>(in);
    real.spec.boundary = (Boundary)get<uint8_t>(in);
    real.spec.protocol = (Protocol)get<uint8_t>(in);
    get<uint16_t>(in);
    real.spec.validate();
    real.p_meas = get<double>(in);
    real.t = get<double>(in);
    real.seed = get<uint64_t>(in);
    real.index = get<uint64_t>(in);

    const LatticeSpec &s = real.spec;
    size_t n = s.num_bonds();
    auto unpack = [&]() {
        std::vector<uint8_t> bytes((n + 7) / 8);
        in.read(reinterpret_cast<char *>(bytes.data()), (std::streamsize)bytes.size());
        if (!in) {
            throw std::runtime_error("truncated realization record");
        }
        std::vector<uint8_t> bits(n);
        for (size_t k = 0; k < n; k++) {
            bits[k] = (bytes[k / 8] >> (k % 8)) & 1;
        }
        return bits;
    };
    std::vector<uint8_t> mask_bits = unpack();
    std::vector<uint8_t> sign_bits = unpack();
    size_t pos = 0;
    for (auto [m, sg, count] : {std::tuple{&real.mask.spatial, &real.spatial_sign, s.num_spatial()},
                                std::tuple{&real.mask.temporal, &real.temporal_sign, s.num_temporal()},
                                std::tuple{&real.mask.test, &real.test_sign, s.num_test()}}) {
        m->resize(count);
        sg->resize(count);
        for (size_t k = 0; k < count; k++, pos++) {
            (*m)[k] = mask_bits[pos];
            (*sg)[k] = mask_bits[pos] ? (sign_bits[pos] ? -1 : 1) : 0;
        }
    }
    real.validate();
    return real;
}

void write_text(std::ostream &out, const DisorderRealization &real) {
    const LatticeSpec &s = real.spec;
    int nsp = s.spatial_per_row();
    for (int y = 0; y < s.L_y; y++) {
        for (int x = 0; x < nsp; x++) {
            size_t k = (size_t)y * nsp + x;
            out << x << ' ' << y << " s " << (int)real.mask.spatial[k] << ' ' << (int)real.spatial_sign[k] << '\n';
        }
    }
    for (int y = 0; y + 1 < s.L_y; y++) {
        for (int x = 0; x < s.L_x; x++) {
            size_t k = (size_t)y * s.L_x + x;
            out << x << ' ' << y << " t " << (int)real.mask.temporal[k] << ' ' << (int)real.temporal_sign[k] << '\n';
        }
    }
    if (s.has_test_spins()) {
        for (int y = 0; y < s.L_y; y++) {
            for (int side = 0; side < 2; side++) {
                size_t k = (size_t)y * 2 + side;
                out << (side == 0 ? 0 : s.L_x - 1) << ' ' << y << (side == 0 ? " l " : " r ")
                    << (int)real.mask.test[k] << ' ' << (int)real.test_sign[k] << '\n';
            }
        }
    }
}

}  // namespace mipt
