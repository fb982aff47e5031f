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

#ifndef MIPT_LINALG_H
#define MIPT_LINALG_H

#include <Eigen/Dense>

namespace mipt {

/// Thin SVD a = u * diag(s) * vt with s descending.
struct Svd {
    Eigen::MatrixXd u;
    Eigen::VectorXd s;
    Eigen::MatrixXd vt;
};

/// LAPACK divide-and-conquer SVD, falling back to the QR-iteration driver
/// when it does not converge. Eigen 3.4.0's BDCSVD mis-deflates exactly
/// degenerate spectra, which are generic here, so it is not used.
Svd thin_svd(const Eigen::MatrixXd &a);

/// Singular values only, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd &a);

}  // namespace mipt

#endif
