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

#ifndef MIPT_RNG_H
#define MIPT_RNG_H

#include <array>
#include <cstdint>
#include <limits>

namespace mipt {

/// Philox4x32 with 10 rounds (Salmon et al. counter-based family).
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key);

/// Purpose tags separating the substreams drawn for one sample.
enum class Purpose : uint16_t {
    Dilution = 1,
    Signs = 2,
    Gauge = 3,
    Outcomes = 4,
    Bootstrap = 5,
    Program = 6,
    Test = 7,
};

/// Substream keyed by (seed, sample index, purpose). The 64-bit seed is the
/// Philox key; the sample index and purpose occupy the high counter words and
/// the low counter words count blocks, so streams never overlap.
class Rng {
   public:
    using result_type = uint64_t;

    Rng(uint64_t seed, uint64_t sample_index, Purpose purpose);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }
    result_type operator()() {
        return next_u64();
    }

    uint32_t next_u32();
    uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    bool bernoulli(double p);
    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n);

   private:
    void refill();

    std::array<uint32_t, 2> key_;
    uint64_t block_ = 0;
    uint32_t hi_word_;
    uint32_t top_word_;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace mipt

#endif
