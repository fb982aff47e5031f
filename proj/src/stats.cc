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

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mipt/couplings.h"
#include "mipt/rng.h"

namespace mipt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBadCost = 1e10;

double binomial(int n, int k) {
    double b = 1;
    for (int i = 1; i <= k; i++) {
        b = b * (n - k + i) / i;
    }
    return b;
}

}  // namespace

void MomentAccumulator::add(double x) {
    MomentAccumulator one;
    one.n_ = 1;
    one.mean_ = x;
    one.m_[0] = 1;
    merge(one);
}

void MomentAccumulator::merge(const MomentAccumulator &o) {
    if (o.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = o;
        return;
    }
    double na = (double)n_, nb = (double)o.n_, n = na + nb;
    double d = o.mean_ - mean_;
    // Central sums about the pooled mean, expanded from each part's mean.
    double da = -nb * d / n, db = na * d / n;
    std::array<double, kMaxOrder + 1> out{};
    out[0] = n;
    for (int p = 2; p <= kMaxOrder; p++) {
        double s = 0;
        for (int k = 0; k <= p; k++) {
            s += binomial(p, k) * (m_[p - k] * std::pow(da, k) + o.m_[p - k] * std::pow(db, k));
        }
        out[p] = s;
    }
    m_ = out;
    mean_ -= da;
    n_ += o.n_;
}

double MomentAccumulator::central_sum(int k) const {
    if (k < 0 || k > kMaxOrder) {
        throw std::out_of_range("central sum order out of range");
    }
    return m_[k];
}

double MomentAccumulator::mean() const {
    if (n_ == 0) {
        throw std::invalid_argument("mean of an empty accumulator");
    }
    return mean_;
}

std::vector<double> MomentAccumulator::k_statistics(int order) const {
    if (order < 1 || order > kMaxOrder) {
        throw std::invalid_argument("k-statistic order must be in 1..5");
    }
    if (n_ < (uint64_t)std::max(order, 2) && order > 1) {
        throw std::invalid_argument("k-statistic of order " + std::to_string(order) + " needs at least " +
                                    std::to_string(order) + " samples, have " + std::to_string(n_));
    }
    if (n_ == 0) {
        throw std::invalid_argument("k-statistics of an empty accumulator");
    }
    double n = (double)n_;
    std::array<double, kMaxOrder + 1> m{};
    for (int r = 2; r <= order; r++) {
        m[r] = m_[r] / n;
    }
    std::vector<double> k(order);
    k[0] = mean_;
    if (order >= 2) {
        k[1] = n / (n - 1) * m[2];
    }
    if (order >= 3) {
        k[2] = n * n / ((n - 1) * (n - 2)) * m[3];
    }
    if (order >= 4) {
        k[3] = n * n * ((n + 1) * m[4] - 3 * (n - 1) * m[2] * m[2]) / ((n - 1) * (n - 2) * (n - 3));
    }
    if (order >= 5) {
        k[4] = n * n * n * ((n + 5) * m[5] - 10 * (n - 1) * m[2] * m[3]) / ((n - 1) * (n - 2) * (n - 3) * (n - 4));
    }
    return k;
}

std::vector<double> MomentAccumulator::state() const {
    std::vector<double> out{(double)n_, mean_};
    for (int k = 2; k <= kMaxOrder; k++) {
        out.push_back(m_[k]);
    }
    return out;
}

MomentAccumulator MomentAccumulator::from_state(const std::vector<double> &state) {
    if (state.size() != kMaxOrder + 1) {
        throw std::invalid_argument("moment state has the wrong length");
    }
    MomentAccumulator a;
    if (!(state[0] >= 0) || state[0] != std::floor(state[0])) {
        throw std::invalid_argument("moment state has an invalid count");
    }
    a.n_ = (uint64_t)state[0];
    a.mean_ = state[1];
    a.m_[0] = state[0];
    for (int k = 2; k <= kMaxOrder; k++) {
        a.m_[k] = state[k];
    }
    return a;
}

std::vector<double> BlockedMoments::state() const {
    std::vector<double> out;
    for (const auto &b : blocks_) {
        auto s = b.state();
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

BlockedMoments BlockedMoments::from_state(const std::vector<double> &state) {
    const size_t w = MomentAccumulator::kMaxOrder + 1;
    if (state.empty() || state.size() % w != 0) {
        throw std::invalid_argument("blocked moment state has the wrong length");
    }
    BlockedMoments out((int)(state.size() / w));
    for (size_t b = 0; b < out.blocks_.size(); b++) {
        out.blocks_[b] = MomentAccumulator::from_state(std::vector<double>(state.begin() + b * w, state.begin() + (b + 1) * w));
    }
    return out;
}

BlockedMoments::BlockedMoments(int blocks) {
    if (blocks < 1) {
        throw std::invalid_argument("need at least one jackknife block");
    }
    blocks_.resize(blocks);
}

void BlockedMoments::add(uint64_t sample_index, double x) {
    blocks_[sample_index % blocks_.size()].add(x);
}

void BlockedMoments::merge(const BlockedMoments &o) {
    if (o.blocks_.size() != blocks_.size()) {
        throw std::invalid_argument("cannot merge accumulators with different block counts");
    }
    for (size_t b = 0; b < blocks_.size(); b++) {
        blocks_[b].merge(o.blocks_[b]);
    }
}

MomentAccumulator BlockedMoments::total() const {
    MomentAccumulator t;
    for (const auto &b : blocks_) {
        t.merge(b);
    }
    return t;
}

uint64_t BlockedMoments::count() const {
    uint64_t n = 0;
    for (const auto &b : blocks_) {
        n += b.count();
    }
    return n;
}

std::vector<Estimate> BlockedMoments::cumulants(int order) const {
    MomentAccumulator tot = total();
    auto k = tot.k_statistics(order);
    std::vector<Estimate> out(order);
    for (int m = 0; m < order; m++) {
        out[m].value = k[m];
        out[m].error = kNaN;
    }
    std::vector<size_t> populated;
    for (size_t b = 0; b < blocks_.size(); b++) {
        if (blocks_[b].count() > 0) {
            populated.push_back(b);
        }
    }
    size_t p = populated.size();
    if (p < 2) {
        return out;
    }
    std::vector<std::vector<double>> loo;
    for (size_t b : populated) {
        MomentAccumulator acc;
        for (size_t c : populated) {
            if (c != b) {
                acc.merge(blocks_[c]);
            }
        }
        if (acc.count() < (uint64_t)std::max(order, 2)) {
            return out;
        }
        loo.push_back(acc.k_statistics(order));
    }
    for (int m = 0; m < order; m++) {
        double mean = 0;
        for (const auto &v : loo) {
            mean += v[m];
        }
        mean /= (double)p;
        double var = 0;
        for (const auto &v : loo) {
            var += (v[m] - mean) * (v[m] - mean);
        }
        out[m].error = std::sqrt(var * (double)(p - 1) / (double)p);
    }
    return out;
}

FitResult line_fit(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &sigma) {
    size_t n = x.size();
    if (y.size() != n || (!sigma.empty() && sigma.size() != n)) {
        throw std::invalid_argument("line_fit: size mismatch");
    }
    if (n < 2) {
        throw std::invalid_argument("line_fit: need at least two points");
    }
    bool weighted = !sigma.empty();
    for (double s : sigma) {
        if (!(s > 0) || !std::isfinite(s)) {
            weighted = false;
        }
    }
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (size_t i = 0; i < n; i++) {
        double w = weighted ? 1 / (sigma[i] * sigma[i]) : 1;
        S += w;
        Sx += w * x[i];
        Sy += w * y[i];
        Sxx += w * x[i] * x[i];
        Sxy += w * x[i] * y[i];
    }
    double delta = S * Sxx - Sx * Sx;
    if (!(delta > 1e-14 * S * Sxx)) {
        throw std::invalid_argument("line_fit: singular design matrix");
    }
    FitResult f;
    f.n_points = (int)n;
    f.slope = (S * Sxy - Sx * Sy) / delta;
    f.intercept = (Sxx * Sy - Sx * Sxy) / delta;
    double chi2 = 0;
    for (size_t i = 0; i < n; i++) {
        double w = weighted ? 1 / (sigma[i] * sigma[i]) : 1;
        double r = y[i] - f.intercept - f.slope * x[i];
        chi2 += w * r * r;
    }
    double dof = n > 2 ? (double)(n - 2) : kNaN;
    f.chi2_dof = chi2 / dof;
    double scale = weighted ? 1 : (n > 2 ? chi2 / dof : 0);
    f.slope_stderr = std::sqrt(scale * S / delta);
    f.intercept_stderr = std::sqrt(scale * Sxx / delta);
    f.covariance = -scale * Sx / delta;
    return f;
}

double exponent_from_slope(double slope, int order, Boundary b) {
    double sign = (order % 2 == 1) ? 1 : -1;
    return sign * slope * chord_prefactor(b) / 6;
}

FitResult fit_log_slope(const CutSeries &series, const ChordGeometry &geom, int order, double lo_frac,
                        double hi_frac) {
    if (order < 1 || order > 5) {
        throw std::invalid_argument("fit_log_slope: order must be in 1..5");
    }
    double lo = lo_frac * geom.L, hi = hi_frac * geom.L;
    std::vector<double> x, y, s;
    for (size_t i = 0; i < series.l.size(); i++) {
        int l = series.l[i];
        if (l > lo && l < hi) {
            x.push_back(std::log(chord(l, geom)));
            y.push_back(series.value[i]);
            s.push_back(series.error.empty() ? 0 : series.error[i]);
        }
    }
    if (x.empty()) {
        throw std::invalid_argument("fit_log_slope: empty fit window");
    }
    if (x.size() < 4) {
        throw std::invalid_argument("fit_log_slope: need at least 4 points in the window, have " +
                                    std::to_string(x.size()));
    }
    FitResult f = line_fit(x, y, s);
    f.window_lo = lo;
    f.window_hi = hi;
    if (order == 1) {
        f.derived_name = "c_ent";
        f.derived = chord_prefactor(geom.boundary) * f.slope;
        f.derived_stderr = chord_prefactor(geom.boundary) * f.slope_stderr;
    } else {
        f.derived_name = "x^(" + std::to_string(order) + ")";
        f.derived = exponent_from_slope(f.slope, order, geom.boundary);
        f.derived_stderr = std::abs(exponent_from_slope(f.slope_stderr, order, geom.boundary));
    }
    return f;
}

CasimirFit fit_casimir(const std::vector<int> &L, const std::vector<double> &f, const std::vector<double> &sigma,
                       bool include_f1) {
    size_t n = L.size();
    int p = include_f1 ? 3 : 2;
    if (f.size() != n || (!sigma.empty() && sigma.size() != n)) {
        throw std::invalid_argument("fit_casimir: size mismatch");
    }
    if ((int)n < p) {
        throw std::invalid_argument("fit_casimir: need at least " + std::to_string(p) + " sizes");
    }
    bool weighted = !sigma.empty();
    for (double s : sigma) {
        if (!(s > 0) || !std::isfinite(s)) {
            weighted = false;
        }
    }
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd y(n), w(n);
    for (size_t i = 0; i < n; i++) {
        double inv = 1.0 / L[i];
        a(i, 0) = 1;
        int c = 1;
        if (include_f1) {
            a(i, c++) = inv;
        }
        a(i, c) = -kPi * inv * inv / 6;
        y(i) = f[i];
        w(i) = weighted ? 1 / (sigma[i] * sigma[i]) : 1;
    }
    Eigen::MatrixXd normal = a.transpose() * w.asDiagonal() * a;
    Eigen::VectorXd rhs = a.transpose() * w.asDiagonal() * y;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-300)) {
        throw std::invalid_argument("fit_casimir: singular design matrix");
    }
    Eigen::VectorXd beta = ldlt.solve(rhs);
    Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::VectorXd r = y - a * beta;
    double chi2 = (r.array() * r.array() * w.array()).sum();
    double dof = (double)n - p;
    CasimirFit out;
    out.f0 = beta(0);
    out.f1 = include_f1 ? beta(1) : 0;
    out.c = beta(p - 1);
    out.chi2_dof = dof > 0 ? chi2 / dof : kNaN;
    double scale = weighted ? 1 : (dof > 0 ? chi2 / dof : 0);
    out.c_stderr = std::sqrt(scale * cov(p - 1, p - 1));
    return out;
}

double percolation_k_min() {
    return std::log2(3.0) - 2;
}

std::complex<double> percolation_x(std::complex<double> k) {
    std::complex<double> z = std::sqrt(3.0) * std::exp(-(1.0 + k / 2.0) * std::log(2.0));
    std::complex<double> a = std::acos(z);
    return 3.0 * a * a / (2 * kPi * kPi) - 1.0 / 24;
}

double percolation_x(double k) {
    if (!(k >= percolation_k_min())) {
        throw std::invalid_argument("percolation_x: k = " + std::to_string(k) + " below the domain edge " +
                                    std::to_string(percolation_k_min()));
    }
    double z = std::min(1.0, std::sqrt(3.0) * std::exp2(-(1.0 + k / 2)));
    double a = std::acos(z);
    return 3 * a * a / (2 * kPi * kPi) - 1.0 / 24;
}

SpectrumTable percolation_spectrum(const std::vector<double> &k_grid) {
    SpectrumTable t;
    t.k = k_grid;
    for (double k : k_grid) {
        t.x_k.push_back(percolation_x(k));
    }
    // f^(m)(0) = m! / r^m * mean_j f(r w^j) w^(-j m) on N points of radius r,
    // well inside the distance to the branch point at k_min.
    const int n_points = 64;
    const double r = 0.2;
    std::vector<std::complex<double>> f(n_points);
    for (int j = 0; j < n_points; j++) {
        f[j] = percolation_x(std::polar(r, 2 * kPi * j / n_points));
    }
    double fact = 1;
    for (int m = 1; m <= 5; m++) {
        fact *= m;
        std::complex<double> acc = 0;
        for (int j = 0; j < n_points; j++) {
            acc += f[j] * std::polar(1.0, -2 * kPi * j * m / n_points);
        }
        t.derivative[m - 1] = (acc.real() / n_points) * fact / std::pow(r, m);
    }
    return t;
}

std::array<double, 5> percolation_derivatives_richardson() {
    std::array<double, 5> out{};
    for (int m = 1; m <= 5; m++) {
        // Central m-th difference with nodes (m/2 - j) h; error even in h.
        auto diff = [m](double h) {
            double s = 0;
            for (int j = 0; j <= m; j++) {
                double sign = (j % 2) ? -1 : 1;
                s += sign * binomial(m, j) * percolation_x((m / 2.0 - j) * h);
            }
            return s / std::pow(h, m);
        };
        const int levels = 4;
        double h0 = 0.12;
        std::vector<std::vector<double>> table(levels);
        for (int i = 0; i < levels; i++) {
            table[i].push_back(diff(h0 / std::pow(2.0, i)));
            for (int j = 1; j <= i; j++) {
                double f = std::pow(4.0, j);
                table[i].push_back((f * table[i][j - 1] - table[i - 1][j - 1]) / (f - 1));
            }
        }
        out[m - 1] = table[levels - 1][levels - 1];
    }
    return out;
}

std::vector<Crossing> crossing_finder(const std::vector<Curve> &curves) {
    auto interp = [](const Curve &c, double u) {
        const auto &p = c.points;
        for (size_t i = 0; i + 1 < p.size(); i++) {
            if (u >= p[i].u && u <= p[i + 1].u) {
                double w = (u - p[i].u) / (p[i + 1].u - p[i].u);
                return p[i].y + w * (p[i + 1].y - p[i].y);
            }
        }
        return kNaN;
    };
    std::vector<Crossing> out;
    for (size_t a = 0; a < curves.size(); a++) {
        for (size_t b = a + 1; b < curves.size(); b++) {
            const auto &ca = curves[a], &cb = curves[b];
            if (ca.points.size() < 2 || cb.points.size() < 2) {
                continue;
            }
            double lo = std::max(ca.points.front().u, cb.points.front().u);
            double hi = std::min(ca.points.back().u, cb.points.back().u);
            std::vector<double> us;
            for (const auto *c : {&ca, &cb}) {
                for (const auto &p : c->points) {
                    if (p.u >= lo && p.u <= hi) {
                        us.push_back(p.u);
                    }
                }
            }
            std::sort(us.begin(), us.end());
            us.erase(std::unique(us.begin(), us.end()), us.end());
            for (size_t i = 0; i + 1 < us.size(); i++) {
                double d0 = interp(ca, us[i]) - interp(cb, us[i]);
                double d1 = interp(ca, us[i + 1]) - interp(cb, us[i + 1]);
                if (d0 == 0) {
                    out.push_back({ca.L, cb.L, us[i]});
                    break;
                }
                if ((d0 < 0) != (d1 < 0)) {
                    out.push_back({ca.L, cb.L, us[i] + (us[i + 1] - us[i]) * d0 / (d0 - d1)});
                    break;
                }
            }
        }
    }
    return out;
}

namespace {

// Weighted local quadratic (linear with fewer than four points) through
// (x, y) evaluated at x = 0. Returns false when the design is singular.
bool local_poly_intercept(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &sigma,
                          double *value, double *variance) {
    size_t n = x.size();
    if (n < 2) {
        return false;
    }
    int deg = n >= 4 ? 2 : 1;
    bool weighted = true;
    for (double s : sigma) {
        weighted = weighted && s > 0 && std::isfinite(s);
    }
    Eigen::MatrixXd a(n, deg + 1);
    Eigen::VectorXd b(n);
    for (size_t i = 0; i < n; i++) {
        double w = weighted ? 1 / sigma[i] : 1;
        double p = w;
        for (int d = 0; d <= deg; d++) {
            a(i, d) = p;
            p *= x[i];
        }
        b(i) = w * y[i];
    }
    Eigen::MatrixXd ata = a.transpose() * a;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ata);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 1e-12 * ata.diagonal().maxCoeff())) {
        if (deg == 2) {
            // Retry without curvature.
            Eigen::MatrixXd a1 = a.leftCols(2);
            Eigen::MatrixXd ata1 = a1.transpose() * a1;
            Eigen::LDLT<Eigen::MatrixXd> l1(ata1);
            if (!(l1.vectorD().minCoeff() > 1e-12 * ata1.diagonal().maxCoeff())) {
                return false;
            }
            Eigen::VectorXd c = l1.solve(a1.transpose() * b);
            *value = c(0);
            *variance = weighted ? l1.solve(Eigen::MatrixXd::Identity(2, 2))(0, 0) : 0;
            return true;
        }
        return false;
    }
    Eigen::VectorXd c = ldlt.solve(a.transpose() * b);
    *value = c(0);
    *variance = weighted ? ldlt.solve(Eigen::MatrixXd::Identity(deg + 1, deg + 1))(0, 0) : 0;
    return true;
}

}  // namespace

double collapse_cost(const std::vector<Curve> &curves, double u_c, double nu) {
    if (!(nu > 0.05) || !std::isfinite(u_c)) {
        return kBadCost;
    }
    std::vector<std::vector<double>> xs(curves.size());
    for (size_t a = 0; a < curves.size(); a++) {
        double scale = std::pow((double)curves[a].L, 1 / nu);
        for (const auto &p : curves[a].points) {
            xs[a].push_back((p.u - u_c) * scale);
        }
    }
    double total = 0;
    int terms = 0;
    for (size_t a = 0; a < curves.size(); a++) {
        for (size_t i = 0; i < curves[a].points.size(); i++) {
            double x0 = xs[a][i];
            std::vector<double> nx, ny, ns;
            for (size_t b = 0; b < curves.size(); b++) {
                if (b == a) {
                    continue;
                }
                const auto &xb = xs[b];
                for (size_t j = 0; j + 1 < xb.size(); j++) {
                    if (x0 >= xb[j] && x0 <= xb[j + 1]) {
                        // Bracketing pair plus one neighbour on each side.
                        size_t lo = j > 0 ? j - 1 : 0, hi = std::min(j + 2, xb.size() - 1);
                        for (size_t q = lo; q <= hi; q++) {
                            nx.push_back(xb[q] - x0);
                            ny.push_back(curves[b].points[q].y);
                            ns.push_back(curves[b].points[q].sigma);
                        }
                        break;
                    }
                }
            }
            double y_master, var_master;
            if (!local_poly_intercept(nx, ny, ns, &y_master, &var_master)) {
                continue;
            }
            double s = curves[a].points[i].sigma;
            double d = s * s + var_master;
            if (!(d > 0)) {
                d = 1;
            }
            double r = curves[a].points[i].y - y_master;
            total += r * r / d;
            terms++;
        }
    }
    if (terms < 3) {
        return kBadCost;
    }
    return total / terms;
}

namespace {

struct CostParams {
    const std::vector<Curve> *curves;
};

double gsl_cost(const gsl_vector *v, void *params) {
    auto *p = static_cast<CostParams *>(params);
    return collapse_cost(*p->curves, gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

std::pair<double, double> minimize_cost(const std::vector<Curve> &curves, double u0, double nu0, double u_step,
                                        double nu_step, double *cost_out) {
    CostParams params{&curves};
    gsl_multimin_function fn;
    fn.n = 2;
    fn.f = gsl_cost;
    fn.params = &params;
    gsl_vector *x = gsl_vector_alloc(2);
    gsl_vector *step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, u0);
    gsl_vector_set(x, 1, nu0);
    gsl_vector_set(step, 0, u_step);
    gsl_vector_set(step, 1, nu_step);
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    int status = GSL_CONTINUE;
    for (int iter = 0; iter < 5000 && status == GSL_CONTINUE; iter++) {
        if (gsl_multimin_fminimizer_iterate(s)) {
            break;
        }
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-9);
    }
    double u = gsl_vector_get(s->x, 0), nu = gsl_vector_get(s->x, 1);
    *cost_out = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
    if (status != GSL_SUCCESS) {
        throw std::runtime_error("collapse: optimizer did not converge");
    }
    return {u, nu};
}

}  // namespace

CollapseResult collapse(const std::vector<Curve> &curves, double u_c_guess, double nu_guess, int n_boot,
                        uint64_t seed) {
    if (curves.size() < 3) {
        throw std::invalid_argument("collapse: need at least 3 sizes");
    }
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    for (const auto &c : curves) {
        for (const auto &p : c.points) {
            umin = std::min(umin, p.u);
            umax = std::max(umax, p.u);
        }
    }
    if (collapse_cost(curves, u_c_guess, nu_guess) >= kBadCost) {
        throw std::invalid_argument("collapse: scaled ranges do not overlap at the initial guess");
    }
    gsl_error_handler_t *old = gsl_set_error_handler_off();
    double span = umax - umin;
    CollapseResult res;
    auto best = minimize_cost(curves, u_c_guess, nu_guess, 0.05 * span, 0.2 * nu_guess, &res.cost);
    res.u_c = best.first;
    res.nu = best.second;
    res.crossings = crossing_finder(curves);

    double du = 1e-3 * span, dn = 1e-3 * res.nu;
    res.locally_optimal = true;
    for (auto [a, b] : {std::pair{du, 0.0}, {-du, 0.0}, {0.0, dn}, {0.0, -dn}}) {
        if (collapse_cost(curves, res.u_c + a, res.nu + b) < res.cost - 1e-12 * std::abs(res.cost)) {
            res.locally_optimal = false;
        }
    }

    std::vector<double> bu, bn;
    for (int b = 0; b < n_boot; b++) {
        Rng rng(seed, (uint64_t)b, Purpose::Bootstrap);
        auto resampled = curves;
        for (auto &c : resampled) {
            for (auto &p : c.points) {
                double u1 = rng.uniform(), u2 = rng.uniform();
                p.y += p.sigma * normal_from_uniforms(u1, u2);
            }
        }
        try {
            double cost;
            auto r = minimize_cost(resampled, res.u_c, res.nu, 0.02 * span, 0.1 * res.nu, &cost);
            bu.push_back(r.first);
            bn.push_back(r.second);
        } catch (const std::runtime_error &) {
        }
    }
    gsl_set_error_handler(old);
    res.n_boot = (int)bu.size();
    auto sd = [](const std::vector<double> &v) {
        if (v.size() < 2) {
            return kNaN;
        }
        double m = 0;
        for (double x : v) {
            m += x;
        }
        m /= (double)v.size();
        double s = 0;
        for (double x : v) {
            s += (x - m) * (x - m);
        }
        return std::sqrt(s / (double)(v.size() - 1));
    };
    res.u_c_stderr = sd(bu);
    res.nu_stderr = sd(bn);
    return res;
}

PowerLawFit power_law_fit(const std::vector<double> &x, const std::vector<double> &y,
                          const std::vector<double> &sigma) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("power_law_fit: size mismatch");
    }
    std::vector<double> lx, ly, ls;
    for (size_t i = 0; i < x.size(); i++) {
        if (!(x[i] > 0) || !(y[i] > 0)) {
            throw std::invalid_argument("power_law_fit: data must be positive");
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        if (!sigma.empty()) {
            ls.push_back(sigma[i] / y[i]);
        }
    }
    FitResult f = line_fit(lx, ly, ls);
    PowerLawFit out;
    out.exponent = f.slope;
    out.exponent_stderr = f.slope_stderr;
    out.amplitude = std::exp(f.intercept);
    out.amplitude_stderr = out.amplitude * f.intercept_stderr;
    return out;
}

PhasePoint ray_point(double theta, double r) {
    if (theta < 0 || theta > kPi / 2 || r < 0) {
        throw std::invalid_argument("ray_point: theta must lie in [0, pi/2] and r >= 0");
    }
    double a = r * std::cos(theta), b = r * std::sin(theta);
    PhasePoint p{kPi / 4 * (1 - a), 1 - b};
    if (!(p.t > 0) || p.p_meas < 0) {
        throw std::invalid_argument("ray_point: r = " + std::to_string(r) + " leaves the parameter rectangle");
    }
    return p;
}

CriticalPoint critical_line_locator(double theta, const std::vector<double> &r_grid, const std::vector<int> &sizes,
                                    const std::function<Estimate(int, PhasePoint)> &evaluate) {
    std::vector<Curve> curves;
    for (int L : sizes) {
        Curve c{L, {}};
        for (double r : r_grid) {
            Estimate e = evaluate(L, ray_point(theta, r));
            c.points.push_back({r, e.value, e.error});
        }
        curves.push_back(std::move(c));
    }
    CriticalPoint cp;
    cp.theta = theta;
    cp.crossings = crossing_finder(curves);
    if (cp.crossings.empty()) {
        throw std::runtime_error("critical_line_locator: no crossing in scan range");
    }
    double r = 0;
    for (const auto &c : cp.crossings) {
        r += c.u;
    }
    cp.r = r / (double)cp.crossings.size();
    cp.point = ray_point(theta, cp.r);
    return cp;
}

double normal_from_uniforms(double u1, double u2) {
    double a = 1 - u1;  // (0, 1]
    return std::sqrt(-2 * std::log(a)) * std::cos(2 * kPi * u2);
}

}  // namespace mipt
