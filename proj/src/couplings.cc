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

#include "mipt/couplings.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_t(double t) {
    if (!(t >= 0 && t <= kPi / 4 + 1e-15)) {
        throw std::invalid_argument("t must lie in [0, pi/4], got " + std::to_string(t));
    }
}

}  // namespace

DualCouplings couplings_from_t(double t) {
    check_t(t);
    if (t == 0) {
        return {0, kInf};
    }
    if (t >= kPi / 4) {
        return {kInf, 0};
    }
    // atanh(sin 2t) = ln tan(pi/4 + t) avoids the cancellation in 1 - sin 2t.
    double beta = std::log((std::cos(t) + std::sin(t)) / (std::cos(t) - std::sin(t)));
    double beta_prime = -0.5 * std::log(std::sin(2 * t));
    return {beta, beta_prime};
}

double t_from_beta(double beta) {
    if (beta < 0) {
        throw std::invalid_argument("beta must be nonnegative");
    }
    if (std::isinf(beta)) {
        return kPi / 4;
    }
    return 0.5 * std::asin(std::tanh(beta));
}

double kramers_wannier_dual(double beta) {
    if (beta < 0) {
        throw std::invalid_argument("beta must be nonnegative");
    }
    if (beta == 0) {
        return kInf;
    }
    if (std::isinf(beta)) {
        return 0;
    }
    // tanh b = (1 - e^{-2b}) / (1 + e^{-2b})
    double e = std::exp(-2 * beta);
    return -0.5 * (std::log1p(-e) - std::log1p(e));
}

double self_dual_beta() {
    return 0.5 * std::log1p(std::sqrt(2.0));
}

double prob_plus(double t) {
    check_t(t);
    return 0.5 * (1 + std::sin(2 * t));
}

DualNoise duality_map(double t) {
    check_t(t);
    double p = std::sin(t) * std::sin(t);
    if (t == 0) {
        return {0, kInf};
    }
    return {p, -std::log(std::tan(t))};
}

}  // namespace mipt
