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

#ifndef MIPT_SPECTRA_H
#define MIPT_SPECTRA_H

#include <limits>
#include <string>
#include <vector>

namespace mipt {

/// Renyi index; kRenyiInf selects the min-entropy.
constexpr double kRenyiInf = std::numeric_limits<double>::infinity();

/// The four indices carried by every entropy record.
inline const std::vector<double> &default_renyi() {
    static const std::vector<double> v{1, 2, 3, kRenyiInf};
    return v;
}

std::string renyi_label(double n);
double parse_renyi(const std::string &s);

/// Renyi entropy (nats) of a probability vector; entries need not be
/// normalized exactly (they are rescaled to unit sum).
double renyi_from_probs(const std::vector<double> &probs, double n);

/// Renyi entropy (nats) of a fermionic Gaussian reduced state from the
/// singular values nu_k of its covariance sub-block (one per mode).
double renyi_from_nu(const std::vector<double> &nu, double n);

}  // namespace mipt

#endif
