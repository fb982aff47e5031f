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

#include "mipt/linalg.h"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

// Runs gesdd, then gesvd if gesdd fails. jobz is 'S' (thin) or 'N'.
void run_svd(Eigen::MatrixXd a, char jobz, Svd &out) {
    lapack_int m = (lapack_int)a.rows();
    lapack_int n = (lapack_int)a.cols();
    lapack_int k = std::min(m, n);
    out.s.resize(k);
    bool want = jobz == 'S';
    out.u.resize(want ? m : 1, want ? k : 1);
    out.vt.resize(want ? k : 1, want ? n : 1);
    if (k == 0) {
        return;
    }
    Eigen::MatrixXd copy = a;
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, a.data(), m, out.s.data(), out.u.data(),
                                     want ? m : 1, out.vt.data(), want ? k : 1);
    if (info == 0) {
        return;
    }
    std::vector<double> superb(std::max<lapack_int>(k - 1, 1));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, jobz, jobz, m, n, copy.data(), m, out.s.data(), out.u.data(),
                          want ? m : 1, out.vt.data(), want ? k : 1, superb.data());
    if (info != 0) {
        throw std::runtime_error("SVD failed to converge (info " + std::to_string(info) + ")");
    }
}

}  // namespace

Svd thin_svd(const Eigen::MatrixXd &a) {
    Svd out;
    run_svd(a, 'S', out);
    return out;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd &a) {
    Svd out;
    run_svd(a, 'N', out);
    return out.s;
}

}  // namespace mipt
