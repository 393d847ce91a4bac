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

#ifndef SKEWVOL_STATES_HPP
#define SKEWVOL_STATES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

namespace skewvol {

/// AR(1) state equation s_t = phi s_{t-1} + beta' w_t + innovation, shared by
/// the log-volatility and the shape processes. The exogenous block is
/// optional; when present, row t-1 of exo_series holds the regressors w_t
/// entering the transition into state t (t = 1..T).
struct StateEqSpec {
    double phi = 0.95;
    double sigma2 = 0.04;
    Eigen::VectorXd exo_coeffs;                 // length k (possibly 0)
    std::optional<Eigen::MatrixXd> exo_series;  // T x k

    int exo_dim() const { return static_cast<int>(exo_coeffs.size()); }

    /// beta' w_t for the transition into state t (1-based); 0 without exo.
    double exo_shift(int t) const {
        if (exo_dim() == 0) return 0.0;
        if (!exo_series) throw std::invalid_argument("StateEqSpec: exo_coeffs without exo_series");
        return exo_coeffs.dot(exo_series->row(t - 1));
    }

    void validate(int T) const {
        if (!(sigma2 > 0.0)) throw std::invalid_argument("StateEqSpec: sigma2 must be positive");
        if (exo_series) {
            if (exo_series->cols() != exo_coeffs.size())
                throw std::invalid_argument("StateEqSpec: exo_coeffs/exo_series width mismatch");
            if (exo_series->rows() < T)
                throw std::invalid_argument("StateEqSpec: exo_series shorter than sample");
        } else if (exo_dim() != 0) {
            throw std::invalid_argument("StateEqSpec: exo_coeffs without exo_series");
        }
    }
};

inline double transition_logh(double log_h_prev, const StateEqSpec& spec, double innovation) {
    return spec.phi * log_h_prev + innovation;
}

inline double transition_logh(double log_h_prev, const StateEqSpec& spec, int t,
                              double innovation) {
    return spec.phi * log_h_prev + spec.exo_shift(t) + innovation;
}

template <class ExoRow>
inline double transition_lambda(double lambda_prev, const StateEqSpec& spec, const ExoRow& exo_row,
                                double innovation) {
    if (static_cast<int>(exo_row.size()) != spec.exo_dim())
        throw std::invalid_argument("transition_lambda: exo row dimension mismatch");
    double shift = 0.0;
    for (int j = 0; j < spec.exo_dim(); ++j) shift += spec.exo_coeffs[j] * exo_row[j];
    return spec.phi * lambda_prev + shift + innovation;
}

inline double transition_lambda(double lambda_prev, const StateEqSpec& spec, double innovation) {
    return transition_lambda(lambda_prev, spec, Eigen::VectorXd(0), innovation);
}

/// Latent paths for one series: volatilities h_t > 0 (stored as the level),
/// shape parameters lambda_t, and the mixing variables v_t >= 0, o_t > 0.
/// o is identically 1 under Skew-Normal shocks.
struct LatentPaths {
    Eigen::VectorXd h;
    Eigen::VectorXd lambda;
    Eigen::VectorXd v;
    Eigen::VectorXd o;
    double log_h0 = 0.0;
    double lambda0 = 0.0;

    int size() const { return static_cast<int>(h.size()); }

    static LatentPaths constant(int T, double h_level) {
        LatentPaths p;
        p.h = Eigen::VectorXd::Constant(T, h_level);
        p.lambda = Eigen::VectorXd::Zero(T);
        p.v = Eigen::VectorXd::Constant(T, 0.79788456080286535588); // half-normal mean
        p.o = Eigen::VectorXd::Ones(T);
        p.log_h0 = std::log(h_level);
        return p;
    }

    bool valid() const {
        const int T = size();
        if (lambda.size() != T || v.size() != T || o.size() != T) return false;
        for (int t = 0; t < T; ++t) {
            if (!(h[t] > 0.0) || !(o[t] > 0.0) || v[t] < 0.0) return false;
        }
        return true;
    }
};

} // namespace skewvol

#endif // SKEWVOL_STATES_HPP
