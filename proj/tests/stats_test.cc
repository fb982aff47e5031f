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


#include "mipt/stats.h"

#include <gtest/gtest.h>

#include <cmath>

#include "mipt/rng.h"

using namespace mipt;

namespace {

// Fisher's power-sum expressions for k_2..k_4.
std::vector<double> fisher_k(const std::vector<double> &x) {
    double n = (double)x.size(), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double v : x) {
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    return {s1 / n, (n * s2 - s1 * s1) / (n * (n - 1)),
            (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2)),
            (-6 * std::pow(s1, 4) + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 - 4 * n * (n + 1) * s1 * s3 +
             n * n * (n + 1) * s4) /
                (n * (n - 1) * (n - 2) * (n - 3))};
}

MomentAccumulator accumulate(const std::vector<double> &x) {
    MomentAccumulator a;
    for (double v : x) {
        a.add(v);
    }
    return a;
}

std::vector<double> skewed_data(uint64_t seed, int n, double offset) {
    Rng rng(seed, 0, Purpose::Test);
    std::vector<double> x;
    for (int i = 0; i < n; i++) {
        x.push_back(offset + std::pow(rng.uniform(), 2) * 3);
    }
    return x;
}

}  // namespace

TEST(stats, k_statistics_small_example) {
    auto k = accumulate({1, 2, 3}).k_statistics(3);
    EXPECT_NEAR(k[0], 2, 1e-15);
    EXPECT_NEAR(k[1], 1, 1e-15);
    EXPECT_NEAR(k[2], 0, 1e-15);
}

TEST(stats, constant_data_has_zero_higher_cumulants) {
    auto k = accumulate(std::vector<double>(20, 4.25)).k_statistics(5);
    EXPECT_DOUBLE_EQ(k[0], 4.25);
    for (int m = 1; m < 5; m++) {
        EXPECT_EQ(k[m], 0);
    }
}

TEST(stats, k_statistics_match_power_sum_formulas) {
    auto x = skewed_data(1, 37, 10.0);
    auto k = accumulate(x).k_statistics(4);
    auto f = fisher_k(x);
    for (int m = 0; m < 4; m++) {
        EXPECT_NEAR(k[m], f[m], 1e-9 * std::max(1.0, std::abs(f[m])));
    }
}

TEST(stats, k_statistics_are_unbiased) {
    // Exact expectation over all 3^6 samples of a three-point law equals the
    // population cumulants from the moment recursion.
    const std::vector<double> vals{0, 1, 3};
    const std::vector<double> prob{0.2, 0.5, 0.3};
    const int n = 6;
    std::vector<double> mu(6, 0);
    for (int r = 0; r <= 5; r++) {
        for (int i = 0; i < 3; i++) {
            mu[r] += prob[i] * std::pow(vals[i], r);
        }
    }
    // kappa_r = mu_r - sum_{j=1}^{r-1} C(r-1, j-1) kappa_j mu_{r-j}.
    std::vector<double> kappa(6, 0);
    auto binom = [](int a, int b) {
        double c = 1;
        for (int i = 1; i <= b; i++) {
            c = c * (a - b + i) / i;
        }
        return c;
    };
    for (int r = 1; r <= 5; r++) {
        kappa[r] = mu[r];
        for (int j = 1; j < r; j++) {
            kappa[r] -= binom(r - 1, j - 1) * kappa[j] * mu[r - j];
        }
    }
    std::vector<double> expect(5, 0);
    int total = 1;
    for (int i = 0; i < n; i++) {
        total *= 3;
    }
    for (int code = 0; code < total; code++) {
        int c = code;
        double w = 1;
        MomentAccumulator a;
        for (int i = 0; i < n; i++) {
            a.add(vals[c % 3]);
            w *= prob[c % 3];
            c /= 3;
        }
        auto k = a.k_statistics(5);
        for (int m = 0; m < 5; m++) {
            expect[m] += w * k[m];
        }
    }
    for (int m = 0; m < 5; m++) {
        EXPECT_NEAR(expect[m], kappa[m + 1], 1e-12) << "order " << m + 1;
    }
}

TEST(stats, requires_enough_samples) {
    auto a = accumulate({1, 2, 3, 4});
    EXPECT_NO_THROW(a.k_statistics(4));
    EXPECT_THROW(a.k_statistics(5), std::invalid_argument);
    EXPECT_THROW(MomentAccumulator().k_statistics(1), std::invalid_argument);
}

TEST(stats, merge_matches_pooled_data) {
    auto x = skewed_data(2, 300, 7.0);
    std::vector<double> a(x.begin(), x.begin() + 90), b(x.begin() + 90, x.begin() + 200), c(x.begin() + 200, x.end());
    MomentAccumulator pa = accumulate(a), pb = accumulate(b), pc = accumulate(c);
    auto pooled = accumulate(x).k_statistics(5);
    MomentAccumulator left = pa;
    left.merge(pb);
    left.merge(pc);
    MomentAccumulator bc = pb;
    bc.merge(pc);
    MomentAccumulator right = pa;
    right.merge(bc);
    MomentAccumulator swapped = pc;
    swapped.merge(pa);
    swapped.merge(pb);
    for (const auto *m : {&left, &right, &swapped}) {
        auto k = m->k_statistics(5);
        EXPECT_EQ(m->count(), 300u);
        for (int i = 0; i < 5; i++) {
            EXPECT_NEAR(k[i], pooled[i], 1e-12 * std::max(std::abs(pooled[i]), 1e-3)) << i;
        }
    }
}

TEST(stats, gaussian_null_test_for_higher_cumulants) {
    BlockedMoments acc(64);
    Rng rng(11, 0, Purpose::Test);
    for (uint64_t i = 0; i < 1000000; i++) {
        acc.add(i, normal_from_uniforms(rng.uniform(), rng.uniform()));
    }
    auto c = acc.cumulants(4);
    EXPECT_NEAR(c[0].value, 0, 3 * c[0].error);
    EXPECT_NEAR(c[1].value, 1, 3 * c[1].error);
    EXPECT_NEAR(c[2].value, 0, 3 * c[2].error);
    EXPECT_NEAR(c[3].value, 0, 3 * c[3].error);
    // Jackknife error of the mean is close to 1/sqrt(n).
    EXPECT_NEAR(c[0].error, 1e-3, 2.5e-4);
}

TEST(stats, blocked_merge_is_order_independent) {
    auto x = skewed_data(3, 500, 0.0);
    BlockedMoments all(8), a(8), b(8);
    for (size_t i = 0; i < x.size(); i++) {
        all.add(i, x[i]);
        (i % 3 ? a : b).add(i, x[i]);
    }
    a.merge(b);
    auto ca = a.cumulants(3), cb = all.cumulants(3);
    for (int m = 0; m < 3; m++) {
        EXPECT_NEAR(ca[m].value, cb[m].value, 1e-12);
        EXPECT_NEAR(ca[m].error, cb[m].error, 1e-12);
    }
}

TEST(stats, noiseless_log_slope_recovery) {
    for (Boundary bd : {Boundary::Periodic, Boundary::Open}) {
        ChordGeometry g{128, bd};
        CutSeries s;
        double c = 0.5;
        for (int l = 1; l < 128; l++) {
            s.l.push_back(l);
            s.value.push_back(c / chord_prefactor(bd) * std::log(chord(l, g)) + 0.3);
        }
        FitResult f = fit_log_slope(s, g, 1);
        EXPECT_NEAR(f.derived, 0.5, 1e-12);
        EXPECT_EQ(f.derived_name, "c_ent");
        EXPECT_DOUBLE_EQ(f.window_lo, 16);
        EXPECT_DOUBLE_EQ(f.window_hi, 112);
        EXPECT_EQ(f.n_points, 95);
    }
}

TEST(stats, exponent_sign_convention) {
    // kappa_m = (-1)^(m-1) 2 x^(m) ln R on a ring.
    ChordGeometry g{64, Boundary::Periodic};
    for (int m = 1; m <= 5; m++) {
        double x = 0.01 * m;
        CutSeries s;
        for (int l = 1; l < 64; l++) {
            s.l.push_back(l);
            s.value.push_back((m % 2 ? 1 : -1) * 2 * x * std::log(chord(l, g)));
        }
        EXPECT_NEAR(fit_log_slope(s, g, m).derived, m == 1 ? 6 * x : x, 1e-12);
    }
}

TEST(stats, fit_window_errors) {
    ChordGeometry g{16, Boundary::Periodic};
    CutSeries s{{1, 2, 3}, {0, 1, 2}, {}};
    EXPECT_THROW(fit_log_slope(s, g, 1), std::invalid_argument);
    CutSeries t{{3, 4, 5}, {0, 1, 2}, {}};
    EXPECT_THROW(fit_log_slope(t, g, 1), std::invalid_argument);
    EXPECT_THROW(line_fit({1, 1, 1}, {1, 2, 3}, {}), std::invalid_argument);
}

TEST(stats, casimir_fit_recovers_synthetic_c) {
    std::vector<int> L{8, 12, 16, 20, 24};
    std::vector<double> f;
    for (int l : L) {
        f.push_back(-0.9 + 0.01 / l - kPi * 0.5 / (6.0 * l * l));
    }
    EXPECT_NEAR(fit_casimir(L, f, {}).c, 0.5, 1e-9);
    std::vector<double> g;
    for (int l : L) {
        g.push_back(-0.9 - kPi * 0.5 / (6.0 * l * l));
    }
    EXPECT_NEAR(fit_casimir(L, g, {}, false).c, 0.5, 1e-10);
}

TEST(stats, percolation_spectrum_exact_values) {
    auto t = percolation_spectrum({0.0, 1.0, 2.0});
    EXPECT_NEAR(t.x_k[0], 0, 1e-14);
    EXPECT_NEAR(t.derivative[0], std::sqrt(3.0) / (4 * kPi) * std::log(2.0), 1e-10);
    // 12-digit references from an independent 40-digit evaluation.
    const double ref[5] = {0.0955380173557, -0.0229136616097, 0.00349218288166, 0.000232505094723,
                           -0.000256093219824};
    for (int m = 0; m < 5; m++) {
        EXPECT_NEAR(t.derivative[m], ref[m], 1e-11) << m + 1;
    }
    EXPECT_NEAR(t.x_k[1], 0.0846707240, 1e-9);
    // Series with the five quoted coefficients.
    double series = 0.09554 - 0.02291 / 2 + 0.0034922 / 6 + 0.0002325 / 24 - 0.0002561 / 120;
    EXPECT_NEAR(t.x_k[1], series, 1e-5);
}

TEST(stats, percolation_spectrum_two_routes_agree) {
    auto t = percolation_spectrum({});
    auto r = percolation_derivatives_richardson();
    for (int m = 0; m < 5; m++) {
        EXPECT_NEAR(t.derivative[m], r[m], 1e-7) << m + 1;
    }
}

TEST(stats, percolation_domain) {
    EXPECT_THROW(percolation_x(-0.5), std::invalid_argument);
    EXPECT_NO_THROW(percolation_x(percolation_k_min()));
    EXPECT_NEAR(percolation_x(percolation_k_min()), -1.0 / 24, 1e-7);
}

namespace {

std::vector<Curve> synthetic_curves(double uc, double nu, double noise, uint64_t seed) {
    Rng rng(seed, 0, Purpose::Test);
    std::vector<Curve> out;
    for (int L : {8, 16, 32, 64}) {
        Curve c{L, {}};
        for (int i = 0; i <= 20; i++) {
            double u = uc - 0.2 + 0.02 * i;
            double x = (u - uc) * std::pow(L, 1 / nu);
            double y = 0.5 + 0.4 * std::tanh(x) + 0.05 * x * std::exp(-x * x);
            y += noise * normal_from_uniforms(rng.uniform(), rng.uniform());
            c.points.push_back({u, y, noise});
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST(stats, collapse_recovers_synthetic_nu) {
    auto curves = synthetic_curves(0.5, 1.5, 0.003, 4);
    auto r = collapse(curves, 0.45, 1.2, 40, 9);
    EXPECT_NEAR(r.nu, 1.5, 0.02);
    EXPECT_NEAR(r.u_c, 0.5, 0.005);
    EXPECT_TRUE(r.locally_optimal);
    EXPECT_GT(r.n_boot, 30);
    EXPECT_GT(r.nu_stderr, 0);
    EXPECT_LT(r.nu_stderr, 0.05);
    EXPECT_GE(r.crossings.size(), 5u);
    for (const auto &c : r.crossings) {
        EXPECT_NEAR(c.u, 0.5, 0.01);
    }
}

TEST(stats, collapse_noiseless_bias_is_small) {
    auto r = collapse(synthetic_curves(0.5, 1.5, 0.0, 4), 0.45, 1.2, 0, 9);
    EXPECT_NEAR(r.nu, 1.5, 0.005);
    EXPECT_NEAR(r.u_c, 0.5, 1e-3);
    EXPECT_LT(r.cost, 1e-4);
}

TEST(stats, collapse_errors) {
    auto curves = synthetic_curves(0.5, 1.5, 0.0, 1);
    curves.pop_back();
    curves.pop_back();
    EXPECT_THROW(collapse(curves, 0.5, 1.5), std::invalid_argument);
    auto far = synthetic_curves(0.5, 1.5, 0.0, 1);
    for (size_t i = 0; i < far.size(); i++) {
        for (auto &p : far[i].points) {
            p.u += 10.0 * i;
        }
    }
    EXPECT_THROW(collapse(far, 0.5, 1.5), std::invalid_argument);
}

TEST(stats, crossing_of_two_lines) {
    Curve a{8, {{0, 0, 0}, {1, 1, 0}}};
    Curve b{16, {{0, 0.75, 0}, {0.5, 0.5, 0}, {1, 0.25, 0}}};
    auto c = crossing_finder({a, b});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].u, 0.5, 1e-12);
}

TEST(stats, power_law_noiseless_and_coverage) {
    std::vector<double> x{1, 2, 4, 8, 16}, y;
    for (double v : x) {
        y.push_back(2 * std::sqrt(v));
    }
    auto f = power_law_fit(x, y);
    EXPECT_NEAR(f.amplitude, 2, 1e-12);
    EXPECT_NEAR(f.exponent, 0.5, 1e-12);
    EXPECT_THROW(power_law_fit({1, -2}, {1, 2}), std::invalid_argument);
    int covered = 0, trials = 400;
    for (int t = 0; t < trials; t++) {
        Rng rng(21, t, Purpose::Test);
        std::vector<double> yn, sn;
        for (double v : x) {
            double s = 0.05 * 2 * std::sqrt(v);
            yn.push_back(2 * std::sqrt(v) + s * normal_from_uniforms(rng.uniform(), rng.uniform()));
            sn.push_back(s);
        }
        auto g = power_law_fit(x, yn, sn);
        covered += std::abs(g.exponent - 0.5) < 1.96 * g.exponent_stderr;
    }
    EXPECT_NEAR((double)covered / trials, 0.95, 0.04);
}

TEST(stats, ray_geometry) {
    auto p0 = ray_point(0, 0.428);
    EXPECT_DOUBLE_EQ(p0.p_meas, 1);
    EXPECT_NEAR(p0.t / kPi, 0.25 * (1 - 0.428), 1e-15);
    auto p1 = ray_point(kPi / 2, 0.5);
    EXPECT_NEAR(p1.t, kPi / 4, 1e-15);
    EXPECT_NEAR(p1.p_meas, 0.5, 1e-15);
    auto pm = ray_point(kPi / 4, 0.4);
    EXPECT_GT(pm.t, 0);
    EXPECT_LT(pm.t, kPi / 4);
    EXPECT_GT(pm.p_meas, 0);
    EXPECT_LT(pm.p_meas, 1);
    EXPECT_THROW(ray_point(0, 1.0), std::invalid_argument);
}

TEST(stats, critical_line_locator_synthetic) {
    std::vector<double> grid;
    for (int i = 0; i <= 10; i++) {
        grid.push_back(0.1 + 0.04 * i);
    }
    auto eval = [](int L, PhasePoint p) {
        double a = 1 - p.t / (kPi / 4), b = 1 - p.p_meas;
        double r = std::hypot(a, b);
        return Estimate{0.5 + 0.4 * std::tanh((r - 0.33) * L / 4.0), 0.01};
    };
    auto cp = critical_line_locator(0.7, grid, {8, 16, 32}, eval);
    EXPECT_NEAR(cp.r, 0.33, 1e-3);
    EXPECT_THROW(critical_line_locator(0.7, {0.1, 0.2}, {8, 16}, eval), std::runtime_error);
}
