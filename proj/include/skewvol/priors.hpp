/*
 * Copyright 2026 The skewvol authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SKEWVOL_PRIORS_HPP
#define SKEWVOL_PRIORS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace skewvol {

/// Minnesota shrinkage hyperparameters. theta1 scales own-lag variances,
/// theta2 the cross-variable discount, theta3 the deterministic-term
/// (intercept) variance, theta4 the lag-decay exponent.
struct MinnesotaHyper {
    double theta1 = 0.04;
    double theta2 = 0.025;
    double theta3 = 100.0;
    double theta4 = 2.0;

    void validate() const {
        if (!(theta1 > 0 && theta2 > 0 && theta3 > 0 && theta4 > 0))
            throw std::invalid_argument("MinnesotaHyper: all hyperparameters must be positive");
    }
};

/// Diagonal of the Minnesota prior covariance for the VAR coefficients, in
/// vec(Pi) order (equation-major; within an equation: intercept first, then
/// lag 1 of variables 1..N, lag 2, ...):
///   own lag l           -> theta1 / l^theta4
///   cross lag (i != j)  -> sigma2_i theta1 theta2 / (sigma2_j l^theta4)
///   intercept           -> theta3
inline Eigen::VectorXd minnesota_cov(const MinnesotaHyper& hyper,
                                     const Eigen::VectorXd& sigma2_by_var, int N, int p,
                                     bool intercept = true) {
    hyper.validate();
    if (sigma2_by_var.size() != N)
        throw std::invalid_argument("minnesota_cov: need one scale per variable");
    for (int i = 0; i < N; ++i)
        if (!(sigma2_by_var[i] > 0.0))
            throw std::invalid_argument("minnesota_cov: scales must be positive");
    const int k = (intercept ? 1 : 0) + N * p;
    Eigen::VectorXd v(N * k);
    for (int i = 0; i < N; ++i) { // equation i
        int c = 0;
        if (intercept) v[i * k + c++] = hyper.theta3;
        for (int l = 1; l <= p; ++l) {
            const double decay = std::pow(static_cast<double>(l), hyper.theta4);
            for (int j = 0; j < N; ++j) {
                v[i * k + c++] = (i == j)
                                     ? hyper.theta1 / decay
                                     : sigma2_by_var[i] * hyper.theta1 * hyper.theta2 /
                                           (sigma2_by_var[j] * decay);
            }
        }
    }
    return v;
}

/// Prior mean of Pi (k x N): own first lag centered at `own_lag_center[j]`
/// (1 for nonstationary series, 0 for stationary), everything else at 0.
inline Eigen::MatrixXd minnesota_mean(const Eigen::VectorXd& own_lag_center, int N, int p,
                                      bool intercept = true) {
    const int k = (intercept ? 1 : 0) + N * p;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(k, N);
    const int off = intercept ? 1 : 0;
    for (int j = 0; j < N; ++j) mean(off + j, j) = own_lag_center[j];
    return mean;
}

/// Residual variance of an AR(lags) fit with intercept, per series.
/// Used for the Minnesota scales (AR(12) in the monthly application) and,
/// over a short initial window, for the log h_0 prior mean (AR(4) on the
/// first 40 observations).
inline Eigen::VectorXd estimate_scales(const Eigen::MatrixXd& data, int lags) {
    const int T = static_cast<int>(data.rows());
    const int N = static_cast<int>(data.cols());
    if (T < lags + 2 + lags) throw std::invalid_argument("estimate_scales: sample too short");
    Eigen::VectorXd out(N);
    const int Te = T - lags;
    Eigen::MatrixXd X(Te, lags + 1);
    for (int j = 0; j < N; ++j) {
        Eigen::VectorXd y(Te);
        for (int t = 0; t < Te; ++t) {
            y[t] = data(t + lags, j);
            X(t, 0) = 1.0;
            for (int l = 1; l <= lags; ++l) X(t, l) = data(t + lags - l, j);
        }
        const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
        const double rss = (y - X * beta).squaredNorm();
        const double dof = std::max(Te - (lags + 1), 1);
        out[j] = rss / dof;
        if (!(out[j] > 0.0)) throw std::invalid_argument("estimate_scales: degenerate series");
    }
    return out;
}

/// log h_0 prior mean: log residual variance of an AR(4) over an initial
/// window (40 observations when available).
inline double logh0_prior_mean(const Eigen::VectorXd& series, int window = 40, int ar_lags = 4) {
    const int n = std::min<int>(window, static_cast<int>(series.size()));
    const Eigen::MatrixXd head = series.head(n);
    return std::log(estimate_scales(head, ar_lags)[0]);
}

/// Univariate observation-equation design description for the Minnesota-style
/// prior variances: intercept, own lags of the dependent variable, then
/// exogenous terms with their lag and residual-variance scale.
struct UniDesignInfo {
    bool intercept = true;
    int y_lags = 0;
    std::vector<std::pair<int, double>> exo; // (lag, sigma2 of the series)
};

/// Minnesota formula specialized to one equation: own lags shrink with
/// theta1 / l^theta4, exogenous terms like cross-variable lags, the
/// intercept gets theta3.
inline Eigen::VectorXd uni_minnesota_cov(const MinnesotaHyper& hyper, double sigma2_y,
                                         const UniDesignInfo& design) {
    hyper.validate();
    Eigen::VectorXd v(static_cast<int>(design.intercept) + design.y_lags +
                      static_cast<int>(design.exo.size()));
    int c = 0;
    if (design.intercept) v[c++] = hyper.theta3;
    for (int l = 1; l <= design.y_lags; ++l)
        v[c++] = hyper.theta1 / std::pow(static_cast<double>(l), hyper.theta4);
    for (const auto& [lag, sig2] : design.exo) {
        const double l = std::max(lag, 1);
        v[c++] = sigma2_y * hyper.theta1 * hyper.theta2 / (sig2 * std::pow(l, hyper.theta4));
    }
    return v;
}

} // namespace skewvol

#endif // SKEWVOL_PRIORS_HPP
