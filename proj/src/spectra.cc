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

#include "mipt/spectra.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mipt {

std::string renyi_label(double n) {
    if (std::isinf(n)) {
        return "inf";
    }
    if (n == std::floor(n)) {
        return std::to_string((long long)n);
    }
    return std::to_string(n);
}

double parse_renyi(const std::string &s) {
    if (s == "inf") {
        return kRenyiInf;
    }
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0)) {
        throw std::invalid_argument("bad Renyi index '" + s + "'");
    }
    return v;
}

double renyi_from_probs(const std::vector<double> &probs, double n) {
    double total = 0;
    for (double p : probs) {
        total += std::max(p, 0.0);
    }
    if (!(total > 0)) {
        throw std::invalid_argument("empty spectrum");
    }
    if (std::isinf(n)) {
        double pmax = 0;
        for (double p : probs) {
            pmax = std::max(pmax, p);
        }
        return -std::log(pmax / total);
    }
    if (n == 1) {
        double s = 0;
        for (double p : probs) {
            double q = p / total;
            if (q > 0) {
                s -= q * std::log(q);
            }
        }
        return std::max(s, 0.0);
    }
    double sum = 0;
    for (double p : probs) {
        double q = std::max(p, 0.0) / total;
        sum += std::pow(q, n);
    }
    return std::max(std::log(sum) / (1 - n), 0.0);
}

double renyi_from_nu(const std::vector<double> &nu, double n) {
    double s = 0;
    for (double v : nu) {
        double a = std::clamp(v, 0.0, 1.0);
        double p = (1 + a) / 2;
        double q = (1 - a) / 2;
        if (std::isinf(n)) {
            s -= std::log(p);
        } else if (n == 1) {
            s -= p * std::log(p);
            if (q > 0) {
                s -= q * std::log(q);
            }
        } else {
            s += std::log(std::pow(p, n) + std::pow(q, n)) / (1 - n);
        }
    }
    return std::max(s, 0.0);
}

}  // namespace mipt
