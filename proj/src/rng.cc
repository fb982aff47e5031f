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

#include "mipt/rng.h"

#include <stdexcept>

namespace mipt {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53;
constexpr uint32_t kMul1 = 0xCD9E8D57;
constexpr uint32_t kWeyl0 = 0x9E3779B9;
constexpr uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t &hi, uint32_t &lo) {
    uint64_t p = (uint64_t)a * (uint64_t)b;
    hi = (uint32_t)(p >> 32);
    lo = (uint32_t)p;
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> c, std::array<uint32_t, 2> k) {
    for (int round = 0; round < 10; round++) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

Rng::Rng(uint64_t seed, uint64_t sample_index, Purpose purpose) {
    if (sample_index >> 48) {
        throw std::invalid_argument("sample index exceeds 48 bits");
    }
    key_ = {(uint32_t)seed, (uint32_t)(seed >> 32)};
    hi_word_ = (uint32_t)sample_index;
    top_word_ = (uint32_t)(sample_index >> 32) | ((uint32_t)purpose << 16);
}

void Rng::refill() {
    buf_ = philox4x32_10({(uint32_t)block_, (uint32_t)(block_ >> 32), hi_word_, top_word_}, key_);
    block_++;
    pos_ = 0;
}

uint32_t Rng::next_u32() {
    if (pos_ == 4) {
        refill();
    }
    return buf_[pos_++];
}

uint64_t Rng::next_u64() {
    uint64_t lo = next_u32();
    uint64_t hi = next_u32();
    return lo | (hi << 32);
}

double Rng::uniform() {
    return (double)(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) {
    if (p >= 1) {
        return true;
    }
    if (p <= 0) {
        return false;
    }
    return uniform() < p;
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("below(0)");
    }
    uint64_t limit = max() - max() % n;
    while (true) {
        uint64_t r = next_u64();
        if (r < limit) {
            return r % n;
        }
    }
}

}  // namespace mipt
