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

#ifndef SKEWVOL_FORECAST_HPP
#define SKEWVOL_FORECAST_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "skewvol/math/stats.hpp"
#include "skewvol/uni_sampler.hpp"
#include "skewvol/var_sampler.hpp"

namespace skewvol {

/// One mixture component of a Rao-Blackwellized predictive density:
/// y = loc + scale * S with S the standard constrained shock at `lambda`
/// (family and nu held on the containing PredictiveDensity).
struct MixtureComponent {
    double loc;
    double scale;
    double lambda;
};

/// Simulated predictive distribution for one origin and horizon: raw draws
/// for quantile-type functionals plus the mixture components for density
/// evaluation.
struct PredictiveDensity {
    int origin = 0;
    int horizon = 1;
    ShockFamily family = ShockFamily::SkewNormal;
    double nu = 5.0;
    bool constrained = true; // components use the zero-mean/unit-variance shock
    Eigen::VectorXd draws;
    std::vector<MixtureComponent> components;

    double component_logpdf(const MixtureComponent& c, double y) const {
        const double z = (y - c.loc) / c.scale;
        double lp;
        if (constrained) {
            lp = shock_logpdf(family == ShockFamily::SkewT ? ShockSpec::skew_t(nu)
                                                           : ShockSpec::skew_normal(),
                              c.lambda, z);
        } else {
            lp = family == ShockFamily::SkewT ? skew_t_std_logpdf(z, c.lambda, nu)
                                              : skew_normal_std_logpdf(z, c.lambda);
        }
        return lp - std::log(c.scale);
    }
};

/// Empirical tau-quantile of the predictive draws (type-7 interpolation).
inline double gar_quantile(const PredictiveDensity& pd, double tau) {
    return math::quantile(std::span<const double>(pd.draws.data(), pd.draws.size()), tau);
}

/// Expected shortfall: mean of the draws at or below the tau-quantile;
/// falls back to the quantile itself if no draw lies below it.
inline double expected_shortfall(const PredictiveDensity& pd, double tau) {
    const double q = gar_quantile(pd, tau);
    double sum = 0.0;
    int n = 0;
    for (int i = 0; i < pd.draws.size(); ++i) {
        if (pd.draws[i] <= q) {
            sum += pd.draws[i];
            ++n;
        }
    }
    return n > 0 ? sum / n : q;
}

/// Probability that the outcome is negative.
inline double recession_prob(const PredictiveDensity& pd) {
    int n = 0;
    for (int i = 0; i < pd.draws.size(); ++i)
        if (pd.draws[i] < 0.0) ++n;
    return static_cast<double>(n) / static_cast<double>(pd.draws.size());
}

/// A lagged reference into either an external series (exo matrix column) or,
/// in the VAR case, an endogenous variable that the forecast simulates.
struct LaggedTerm {
    int series = 0;
    int lag = 1;
};

/// Everything needed to roll the univariate model forward from the end of
/// the estimation sample.
struct UniForecastContext {
    Eigen::VectorXd y_hist;   // observed dependent variable (full history)
    Eigen::MatrixXd exo_hist; // external series aligned with y_hist
    bool intercept = true;
    int y_lags = 0;
    std::vector<LaggedTerm> obs_exo;
    std::vector<LaggedTerm> vol_exo;
    std::vector<LaggedTerm> shape_exo;
    bool hold_last_exo = true;

    int design_dim() const {
        return static_cast<int>(intercept) + y_lags + static_cast<int>(obs_exo.size());
    }

    /// Value of external series j at date index d; dates beyond the sample
    /// hold the last observed value when enabled.
    double exo_at(int series, int d) const {
        const int D = static_cast<int>(exo_hist.rows());
        if (d < 0) throw std::out_of_range("UniForecastContext: exo lag before sample start");
        if (d < D) return exo_hist(d, series);
        if (!hold_last_exo)
            throw std::runtime_error(
                "UniForecastContext: exogenous value needed beyond sample (enable hold-last)");
        return exo_hist(D - 1, series);
    }
};

/// Simulates the predictive distribution `horizon` steps ahead from the
/// posterior draws; returns one PredictiveDensity per horizon 1..H. Each
/// retained draw contributes `fanout` simulated futures, and the mixture
/// component records the one-step-ahead conditional shock distribution of
/// the simulated period.
inline std::vector<PredictiveDensity> simulate_predictive(const PosteriorDraws& post,
                                                          const UniForecastContext& ctx,
                                                          int horizon, Rng& rng, int fanout = 1) {
    if (horizon < 1) throw std::invalid_argument("simulate_predictive: horizon must be >= 1");
    const int D = static_cast<int>(ctx.y_hist.size());
    const int M = post.size();
    const auto shock = post.meta.family == ShockFamily::SkewT ? ShockSpec::skew_t(post.meta.nu)
                                                              : ShockSpec::skew_normal();

    std::vector<PredictiveDensity> out(horizon);
    for (int h = 1; h <= horizon; ++h) {
        out[h - 1].origin = D - 1;
        out[h - 1].horizon = h;
        out[h - 1].family = post.meta.family;
        out[h - 1].nu = post.meta.nu;
        out[h - 1].draws.resize(M * fanout);
        out[h - 1].components.reserve(M * fanout);
    }

    std::vector<double> y_sim(horizon);
    for (int m = 0; m < M; ++m) {
        const auto& d = post.draws[m];
        const int T = static_cast<int>(d.h.size());
        for (int f = 0; f < fanout; ++f) {
            double logh = std::log(d.h[T - 1]);
            double lam = d.lambda[T - 1];
            for (int h = 1; h <= horizon; ++h) {
                const int date = D + h - 1; // date index of the period being simulated
                double c_vol = 0.0, c_shape = 0.0;
                for (std::size_t j = 0; j < ctx.vol_exo.size(); ++j)
                    c_vol += d.params.vol_coefs[1 + j] *
                             ctx.exo_at(ctx.vol_exo[j].series, date - ctx.vol_exo[j].lag);
                for (std::size_t j = 0; j < ctx.shape_exo.size(); ++j)
                    c_shape += d.params.shape_coefs[1 + j] *
                               ctx.exo_at(ctx.shape_exo[j].series, date - ctx.shape_exo[j].lag);
                logh = d.params.phi_h() * logh + c_vol +
                       std::sqrt(d.params.sig2_eta) * rng.normal();
                lam = d.params.phi_lambda() * lam + c_shape +
                      std::sqrt(d.params.sig2_xi) * rng.normal();

                // regression part from (possibly simulated) lags
                double xb = 0.0;
                int c = 0;
                if (ctx.intercept) xb += d.params.pi[c++];
                for (int l = 1; l <= ctx.y_lags; ++l) {
                    const int dl = date - l;
                    const double ylag = dl < D ? ctx.y_hist[dl] : y_sim[dl - D];
                    xb += d.params.pi[c++] * ylag;
                }
                for (const auto& term : ctx.obs_exo)
                    xb += d.params.pi[c++] * ctx.exo_at(term.series, date - term.lag);

                const double sqrt_h = std::exp(0.5 * logh);
                const auto sp = shock_params(shock, lam);
                const double eps = shock_sample_mixing(shock, lam, rng).x;
                const double y = xb + sqrt_h * eps;
                y_sim[h - 1] = y;
                out[h - 1].draws[m * fanout + f] = y;
                out[h - 1].components.push_back({xb + sqrt_h * sp.zeta, sqrt_h * sp.omega, lam});
            }
        }
    }
    return out;
}

/// VAR forecast context: state-equation exogenous terms reference lags of
/// the endogenous variables, so the forecast endogenizes them.
struct VarForecastContext {
    Eigen::MatrixXd y_hist; // D x N
    int target = 0;
    std::vector<std::vector<LaggedTerm>> vol_exo;   // per equation
    std::vector<std::vector<LaggedTerm>> shape_exo; // per equation
};

inline std::vector<PredictiveDensity> simulate_var_predictive(const VarPosteriorDraws& post,
                                                              const VarModelSpec& model,
                                                              const VarForecastContext& ctx,
                                                              int horizon, Rng& rng,
                                                              int fanout = 1) {
    if (horizon < 1) throw std::invalid_argument("simulate_var_predictive: horizon must be >= 1");
    const int D = static_cast<int>(ctx.y_hist.rows());
    const int N = model.n_vars;
    const int p = model.lags;
    const int M = post.size();
    const auto shock = model.shock;

    std::vector<PredictiveDensity> out(horizon);
    for (int h = 1; h <= horizon; ++h) {
        out[h - 1].origin = D - 1;
        out[h - 1].horizon = h;
        out[h - 1].family = post.meta.family;
        out[h - 1].nu = post.meta.nu;
        out[h - 1].draws.resize(M * fanout);
        out[h - 1].components.reserve(M * fanout);
    }

    const auto value_at = [&](const Eigen::MatrixXd& sim, int d, int j) {
        return d < D ? ctx.y_hist(d, j) : sim(d - D, j);
    };

    Eigen::MatrixXd y_sim(horizon, N);
    VarState tmp;
    for (int m = 0; m < M; ++m) {
        const auto& d = post.draws[m];
        const int T = static_cast<int>(d.h.rows());
        tmp.a_rows = d.a_rows;
        const Eigen::MatrixXd A = tmp.A(N);
        const Eigen::MatrixXd Ainv =
            A.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(N, N));
        for (int f = 0; f < fanout; ++f) {
            Eigen::VectorXd logh(N), lam(N);
            for (int i = 0; i < N; ++i) {
                logh[i] = std::log(d.h(T - 1, i));
                lam[i] = d.lambda(T - 1, i);
            }
            for (int h = 1; h <= horizon; ++h) {
                const int date = D + h - 1;
                Eigen::VectorXd scaled(N), sqrt_h(N), zeta(N), omega(N);
                for (int i = 0; i < N; ++i) {
                    double c_vol = 0.0, c_shape = 0.0;
                    if (i < static_cast<int>(ctx.vol_exo.size()))
                        for (std::size_t j = 0; j < ctx.vol_exo[i].size(); ++j)
                            c_vol += d.vol_coefs[i][1 + j] *
                                     value_at(y_sim, date - ctx.vol_exo[i][j].lag,
                                              ctx.vol_exo[i][j].series);
                    if (i < static_cast<int>(ctx.shape_exo.size()))
                        for (std::size_t j = 0; j < ctx.shape_exo[i].size(); ++j)
                            c_shape += d.shape_coefs[i][1 + j] *
                                       value_at(y_sim, date - ctx.shape_exo[i][j].lag,
                                                ctx.shape_exo[i][j].series);
                    logh[i] = d.vol_coefs[i][0] * logh[i] + c_vol +
                              std::sqrt(d.sig2_eta[i]) * rng.normal();
                    lam[i] = d.shape_coefs[i][0] * lam[i] + c_shape +
                             std::sqrt(d.sig2_xi[i]) * rng.normal();
                    sqrt_h[i] = std::exp(0.5 * logh[i]);
                    const auto sp = shock_params(shock, lam[i]);
                    zeta[i] = sp.zeta;
                    omega[i] = sp.omega;
                    scaled[i] = sqrt_h[i] * shock_sample_mixing(shock, lam[i], rng).x;
                }
                const Eigen::VectorXd u = A.triangularView<Eigen::Lower>().solve(scaled);

                Eigen::VectorXd x(model.n_coef());
                int c = 0;
                if (model.intercept) x[c++] = 1.0;
                for (int l = 1; l <= p; ++l)
                    for (int j = 0; j < N; ++j) x[c++] = value_at(y_sim, date - l, j);
                const Eigen::VectorXd y = d.Pi.transpose() * x + u;
                y_sim.row(h - 1) = y.transpose();
                out[h - 1].draws[m * fanout + f] = y[ctx.target];

                // Rao-Blackwellized component for the target equation:
                // condition on the earlier-ordered shocks, leave shock i free
                const int i = ctx.target;
                double loc = x.dot(d.Pi.col(i));
                for (int j = 0; j < i; ++j) loc += Ainv(i, j) * scaled[j];
                loc += sqrt_h[i] * zeta[i];
                out[h - 1].components.push_back({loc, sqrt_h[i] * omega[i], lam[i]});
            }
        }
    }
    return out;
}

} // namespace skewvol

#endif // SKEWVOL_FORECAST_HPP
