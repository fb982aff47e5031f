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

#ifndef MIPT_STATS_H
#define MIPT_STATS_H

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mipt/lattice.h"
#include "mipt/observables.h"

namespace mipt {

/// Mergeable power sums sum (x - shift)^k, k = 0..5, with Neumaier
/// compensation. The shift is fixed by the first value added unless given.
class MomentAccumulator {
   public:
    static constexpr int kMaxOrder = 5;

    void add(double x);
    /// Pools o into this accumulator.
    void merge(const MomentAccumulator &o);

    uint64_t count() const {
        return n_;
    }
    double mean() const;
    /// sum (x - mean)^k for k = 0..kMaxOrder.
    double central_sum(int k) const;

    /// Unbiased k-statistics k_1..k_order. Requires count >= order.
    std::vector<double> k_statistics(int order = kMaxOrder) const;

    /// count, mean, central sums 2..kMaxOrder; exact round trip.
    std::vector<double> state() const;
    static MomentAccumulator from_state(const std::vector<double> &state);

   private:
    uint64_t n_ = 0;
    double mean_ = 0;
    std::array<double, kMaxOrder + 1> m_{};
};

struct Estimate {
    double value = 0;
    double error = 0;
};

/// k-statistics with delete-one-block jackknife errors. Samples are assigned
/// to block sample_index mod blocks, which is independent of scheduling.
class BlockedMoments {
   public:
    explicit BlockedMoments(int blocks = 64);

    void add(uint64_t sample_index, double x);
    void merge(const BlockedMoments &o);
    MomentAccumulator total() const;
    uint64_t count() const;
    /// k_1..k_order with jackknife standard errors (NaN errors when fewer
    /// than two blocks are populated).
    std::vector<Estimate> cumulants(int order) const;

    /// Concatenated block states.
    std::vector<double> state() const;
    static BlockedMoments from_state(const std::vector<double> &state);

   private:
    std::vector<MomentAccumulator> blocks_;
};

/// Straight-line fit y = intercept + slope * x.
struct FitResult {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    double intercept_stderr = 0;
    double covariance = 0;  // cov(slope, intercept)
    double chi2_dof = 0;
    int n_points = 0;
    double window_lo = 0;
    double window_hi = 0;
    /// Physical quantity derived from the slope and its error.
    std::string derived_name;
    double derived = 0;
    double derived_stderr = 0;
};

/// Weighted least squares; sigma entries <= 0 or non-finite switch to an
/// unweighted fit with errors scaled by the residual variance.
FitResult line_fit(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &sigma);

/// Values of one cumulant order against the cut position.
struct CutSeries {
    std::vector<int> l;
    std::vector<double> value;
    std::vector<double> error;
};

/// Fits value(l) against ln R(l) over lo_frac * L < l < hi_frac * L.
/// order = 1 derives c_ent = k * slope (k = 3 periodic, 6 open) and also
/// x^(1); order m > 1 derives x^(m) = (-1)^(m-1) * slope * k / 6.
FitResult fit_log_slope(const CutSeries &series, const ChordGeometry &geom, int order, double lo_frac = 0.125,
                        double hi_frac = 0.875);

/// x^(m) from the fitted slope of kappa_m against ln R.
double exponent_from_slope(double slope, int order, Boundary b);

/// f(L) = f0 + f1 / L - pi c / (6 L^2) for -ln Z per site on cylinders of
/// circumference L. include_f1 = false drops the 1/L term.
struct CasimirFit {
    double c = 0;
    double c_stderr = 0;
    double f0 = 0;
    double f1 = 0;
    double chi2_dof = 0;
};
CasimirFit fit_casimir(const std::vector<int> &L, const std::vector<double> &f, const std::vector<double> &sigma,
                       bool include_f1 = true);

/// Percolation generating function X_k = 3 acos^2(sqrt3 / 2^(1 + k/2)) / (2 pi^2) - 1/24.
double percolation_x(double k);
std::complex<double> percolation_x(std::complex<double> k);
/// Lower edge of the real domain of X_k (acos argument equal to 1).
double percolation_k_min();

struct SpectrumTable {
    std::vector<double> k;
    std::vector<double> x_k;
    /// d^m X / dk^m at k = 0 for m = 1..5.
    std::array<double, 5> derivative{};
};

/// Derivatives from a Cauchy contour (trapezoidal rule on a circle of
/// complex steps around k = 0).
SpectrumTable percolation_spectrum(const std::vector<double> &k_grid);
/// Independent route: real central differences with Richardson extrapolation.
std::array<double, 5> percolation_derivatives_richardson();

/// One curve of a finite-size family: y(u) at size L with errors.
struct CurvePoint {
    double u;
    double y;
    double sigma;
};
struct Curve {
    int L;
    std::vector<CurvePoint> points;
};

struct Crossing {
    int L1;
    int L2;
    double u;
};
/// Pairwise crossings of curves (sorted by u), by linear interpolation of
/// the difference at its first sign change.
std::vector<Crossing> crossing_finder(const std::vector<Curve> &curves);

/// Quality of collapse of y against (u - u_c) L^(1/nu): mean squared
/// deviation from a local linear master curve built from neighbouring
/// points of the other sizes, in units of the combined error.
double collapse_cost(const std::vector<Curve> &curves, double u_c, double nu);

struct CollapseResult {
    double u_c = 0;
    double nu = 0;
    double cost = 0;
    double u_c_stderr = 0;
    double nu_stderr = 0;
    int n_boot = 0;
    bool locally_optimal = false;
    std::vector<Crossing> crossings;
};

/// Minimizes collapse_cost (Nelder-Mead) from a guess; bootstrap errors from
/// n_boot parametric resamples of y.
CollapseResult collapse(const std::vector<Curve> &curves, double u_c_guess, double nu_guess, int n_boot = 100,
                        uint64_t seed = 1);

/// y = amplitude * x^exponent by least squares in log-log coordinates.
struct PowerLawFit {
    double amplitude = 0;
    double exponent = 0;
    double amplitude_stderr = 0;
    double exponent_stderr = 0;
};
PowerLawFit power_law_fit(const std::vector<double> &x, const std::vector<double> &y,
                          const std::vector<double> &sigma = {});

/// Point on a ray from (t = pi/4, p_meas = 1) in the normalized coordinates
/// a = 1 - t / (pi/4), b = 1 - p_meas: (a, b) = r (cos theta, sin theta).
struct PhasePoint {
    double t;
    double p_meas;
};
PhasePoint ray_point(double theta, double r);

/// Scans r along the ray at angle theta, evaluates mean I_s for each size,
/// and returns the critical point from the crossings of the curves.
/// evaluate(L, point) returns (mean, stderr).
struct CriticalPoint {
    double theta;
    double r;
    PhasePoint point;
    std::vector<Crossing> crossings;
};
CriticalPoint critical_line_locator(double theta, const std::vector<double> &r_grid, const std::vector<int> &sizes,
                                    const std::function<Estimate(int, PhasePoint)> &evaluate);

/// Standard normal deviate from two uniforms (Box-Muller), for portable
/// bootstrap streams.
double normal_from_uniforms(double u1, double u2);

}  // namespace mipt

#endif
