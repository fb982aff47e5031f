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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mipt/backend.h"
#include "mipt/backend_exact.h"
#include "mipt/backend_gaussian.h"
#include "mipt/spectra.h"
#include "programs.h"

using namespace mipt;
using mipt_test::max_abs_diff;
using mipt_test::random_program;

namespace {

Eigen::MatrixXd random_antisymmetric(int m, uint64_t seed) {
    Rng rng(seed, 0, Purpose::Test);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; i++) {
        for (int j = i + 1; j < m; j++) {
            a(i, j) = 2 * rng.uniform() - 1;
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

BackendOptions modes() {
    BackendOptions opt;
    opt.gaussian_engine = GaussianEngine::Modes;
    return opt;
}

}  // namespace

TEST(backend_gaussian, pfaffian_small_cases) {
    Eigen::MatrixXd m2(2, 2);
    m2 << 0, 3, -3, 0;
    EXPECT_NEAR(pfaffian(m2), 3, 1e-14);
    Eigen::MatrixXd m4 = random_antisymmetric(4, 1);
    double expect = m4(0, 1) * m4(2, 3) - m4(0, 2) * m4(1, 3) + m4(0, 3) * m4(1, 2);
    EXPECT_NEAR(pfaffian(m4), expect, 1e-13);
    EXPECT_THROW(pfaffian(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
}

TEST(backend_gaussian, pfaffian_squared_is_determinant) {
    for (int m : {2, 6, 10, 16}) {
        auto a = random_antisymmetric(m, 10 + m);
        double pf = pfaffian(a);
        double det = a.determinant();
        EXPECT_NEAR(pf * pf, det, 1e-10 * std::max(1.0, std::abs(det)));
    }
}

TEST(backend_gaussian, initial_state) {
    MajoranaState st(5);
    EXPECT_LT(st.purity_error(), 1e-15);
    EXPECT_NEAR(st.log_overlap_plus(), 0, 1e-15);
    for (int l = 1; l < 5; l++) {
        EXPECT_NEAR(st.entropies(0, l, {1})[0], 0, 1e-14);
    }
}

TEST(backend_gaussian, single_bond_weight) {
    for (int sign : {1, -1}) {
        MajoranaState st(2);
        double c = 0.37;
        st.apply_layer({Gate{GateKind::WeakZZ, 0, 1, (int8_t)sign, c, 0}});
        EXPECT_NEAR(st.log_weight(), 0.5 * std::log(std::cosh(2 * c)), 1e-13);
        EXPECT_NEAR(st.capped_correlator(0, 1), sign * std::tanh(c), 1e-13);
        EXPECT_LT(st.purity_error(), 1e-13);
    }
}

TEST(backend_gaussian, projector_is_idempotent) {
    auto rp = random_program(3, 8, false, 0.2);
    auto b = run_program(BackendKind::Gaussian, rp.prog, BackendOptions{});
    auto *st = dynamic_cast<MajoranaState *>(b.get());
    st->apply_projector(3, 4);
    Eigen::MatrixXd g1 = st->covariance();
    double w1 = st->log_weight();
    st->apply_projector(3, 4);
    EXPECT_LT((st->covariance() - g1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(st->log_weight(), w1, 1e-12);
    EXPECT_THROW(st->apply_projector(4, 3), std::runtime_error);
}

TEST(backend_gaussian, matches_dense_on_random_programs) {
    BackendOptions opt;
    for (uint64_t i = 0; i < 80; i++) {
        auto rp = random_program(i, 10);
        SCOPED_TRACE("i=" + std::to_string(i) + " n=" + std::to_string(rp.prog.n_qubits) +
                     " periodic=" + std::to_string(rp.prog.periodic));
        auto dense = run_program(BackendKind::Exact, rp.prog, opt);
        auto gauss = run_program(BackendKind::Gaussian, rp.prog, opt);
        int n = rp.prog.n_qubits;
        EXPECT_LT(max_abs_diff(dense->entropy_profile(default_renyi()), gauss->entropy_profile(default_renyi())), 1e-8);
        // Wrapping arcs too.
        for (int s = 0; s < n; s++) {
            EXPECT_NEAR(dense->entropies(s, n / 2, {2})[0], gauss->entropies(s, n / 2, {2})[0], 1e-8);
        }
        EXPECT_NEAR(dense->log_weight(), gauss->log_weight(), 1e-9 * std::max(1.0, std::abs(dense->log_weight())));
        double ld = dense->log_overlap_plus();
        double lg = gauss->log_overlap_plus();
        if (std::isinf(ld)) {
            EXPECT_TRUE(std::isinf(lg));
            continue;
        }
        EXPECT_NEAR(ld, lg, 1e-8);
        if (rp.prog.test_spins) {
            EXPECT_NEAR(dense->capped_correlator(0, n - 1), gauss->capped_correlator(0, n - 1), 1e-8);
        }
        for (int b = 1; b < n; b++) {
            EXPECT_NEAR(dense->capped_correlator(0, b), gauss->capped_correlator(0, b), 1e-8);
        }
    }
}

TEST(backend_gaussian, modes_match_covariance) {
    for (uint64_t i = 0; i < 40; i++) {
        auto rp = random_program(300 + i, 40);
        SCOPED_TRACE(i);
        auto cov = run_program(BackendKind::Gaussian, rp.prog, BackendOptions{});
        auto mod = run_program(BackendKind::Gaussian, rp.prog, modes());
        EXPECT_LT(max_abs_diff(cov->entropy_profile(default_renyi()), mod->entropy_profile(default_renyi())), 1e-8);
        EXPECT_TRUE(std::isnan(mod->log_weight()));
        int n = rp.prog.n_qubits;
        if (!std::isinf(cov->log_overlap_plus())) {
            EXPECT_NEAR(cov->log_overlap_plus(), mod->log_overlap_plus(), 1e-8);
            EXPECT_NEAR(cov->capped_correlator(0, n - 1), mod->capped_correlator(0, n - 1), 1e-8);
        }
        auto *m = dynamic_cast<MajoranaModes *>(mod.get());
        auto pre = m->prefix_entropies({1, n / 2, n - 1}, {1, 2});
        auto full = cov->entropy_profile({1, 2});
        EXPECT_NEAR(pre[1][0], full[n / 2 - 1][0], 1e-8);
        EXPECT_NEAR(pre[2][1], full[n - 2][1], 1e-8);
    }
}

TEST(backend_gaussian, purity_drift_is_bounded) {
    // About 1e4 weak gates at generic coupling on a periodic chain.
    LatticeSpec s;
    s.L_x = 32;
    s.L_y = 110;
    s.boundary = Boundary::Periodic;
    double t = 0.11;
    auto real = gauge_fix_temporal(sample_realization(s, t, 1.0, 8, 0));
    auto prog = compile(s, t, 1.0, real);
    ASSERT_GE(prog.gate_count(), 10000u);
    BackendOptions opt;
    opt.gaussian_stabilize_every = 100;
    auto b = run_program(BackendKind::Gaussian, prog, opt);
    EXPECT_LT(dynamic_cast<MajoranaState *>(b.get())->purity_error(), 1e-8);
}

TEST(backend_gaussian, checkpoint_round_trip) {
    auto rp = random_program(7, 12);
    auto b = run_program(BackendKind::Gaussian, rp.prog, BackendOptions{});
    auto *st = dynamic_cast<MajoranaState *>(b.get());
    std::stringstream ss;
    st->write_checkpoint(ss, 42);
    auto [back, row] = MajoranaState::read_checkpoint(ss);
    EXPECT_EQ(row, 42);
    EXPECT_EQ(back.log_weight(), st->log_weight());
    EXPECT_EQ(back.covariance(), st->covariance());
    std::stringstream bad("MIPTXX01garbage");
    EXPECT_THROW(MajoranaState::read_checkpoint(bad), std::runtime_error);
}

TEST(backend_gaussian, rejects_long_range_gates) {
    MajoranaState st(6);
    EXPECT_THROW(st.apply_layer({Gate{GateKind::WeakZZ, 1, 3, 1, 0.2, 0}}), std::invalid_argument);
}
