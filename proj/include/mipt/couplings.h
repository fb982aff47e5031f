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

#ifndef MIPT_COUPLINGS_H
#define MIPT_COUPLINGS_H

namespace mipt {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

/// Ising coupling of the measured bonds and its Kramers-Wannier dual field.
/// Either member may be +infinity.
struct DualCouplings {
    double beta;
    double beta_prime;

    bool operator==(const DualCouplings &other) const = default;
};

/// beta = atanh(sin 2t), beta' = -ln(tanh beta)/2, for 0 <= t <= pi/4.
DualCouplings couplings_from_t(double t);

/// Inverse of beta(t).
double t_from_beta(double beta);

/// -ln(tanh beta)/2, with the limits at 0 and infinity.
double kramers_wannier_dual(double beta);

/// beta* = ln(1 + sqrt 2)/2, where beta equals its dual.
double self_dual_beta();

/// Probability that a measured bond reads +1 before gauge symmetrization.
double prob_plus(double t);

/// Parameters of the dual noisy-channel random-bond model:
/// p_tilde = sin^2 t and beta_tilde = atanh(cos 2t), which satisfy
/// p_tilde / (1 - p_tilde) = exp(-2 beta_tilde).
struct DualNoise {
    double p_tilde;
    double beta_tilde;
};
DualNoise duality_map(double t);

}  // namespace mipt

#endif
