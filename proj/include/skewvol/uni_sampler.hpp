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

#ifndef SKEWVOL_UNI_SAMPLER_HPP
#define SKEWVOL_UNI_SAMPLER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewvol/pgas.hpp"
#include "skewvol/rng.hpp"
#include "skewvol/skewdist.hpp"
#include "skewvol/states.hpp"

namespace skewvol {

enum class PathMethod { Pgas, Mh };

class ChainError : public std::runtime_error {
  public:
    ChainError(const std::string& what, int iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}
    int iteration() const { return iteration_; }

  private:
    int iteration_;
};

/// Observation equation y_t = x_t' pi + sqrt(h_t) eps_t with constrained
/// Skew-Normal or Skew-t shocks, an AR(1) log-volatility state and an AR(1)
/// shape state, each optionally carrying exogenous regressors.
struct UniModelSpec {
    Eigen::MatrixXd regressors; // T x p
    ShockSpec shock;
    StateEqSpec vol_eq;
    StateEqSpec shape_eq;

    int sample_size() const { return static_cast<int>(regressors.rows()); }
    int n_regressors() const { return static_cast<int>(regressors.cols()); }

    void validate() const {
        const int T = sample_size();
        if (T < n_regressors() + 10)
            throw std::invalid_argument("UniModelSpec: sample too short for regressor count");
        vol_eq.validate(T);
        shape_eq.validate(T);
    }
};

struct UniPriorSpec {
    Eigen::VectorXd pi_mean;
    Eigen::MatrixXd pi_cov;
    Eigen::VectorXd vol_coef_mean;    // [phi_h, vol-eq exo coefficients]
    Eigen::MatrixXd vol_coef_cov;
    Eigen::VectorXd shape_coef_mean;  // [phi_lambda, shape-eq exo coefficients]
    Eigen::MatrixXd shape_coef_cov;
    double sig2_eta_shape = 5.0;
    double sig2_eta_scale = 0.16;
    double sig2_xi_shape = 5.0;
    double sig2_xi_scale = 0.16;
    double logh0_mean = 0.0;
    double logh0_var = 100.0;
    double lambda0_mean = 0.0;
    double lambda0_var = 10.0;

    /// Paper-style defaults: phi ~ N(1, 0.01), exogenous state coefficients
    /// ~ N(0, 10), sigma^2 ~ IG(5, 0.16), lambda_0 ~ N(0, 10).
    static UniPriorSpec defaults(int p, int vol_exo = 0, int shape_exo = 0) {
        UniPriorSpec prior;
        prior.pi_mean = Eigen::VectorXd::Zero(p);
        prior.pi_cov = 10.0 * Eigen::MatrixXd::Identity(p, p);
        prior.vol_coef_mean = Eigen::VectorXd::Zero(1 + vol_exo);
        prior.vol_coef_mean[0] = 1.0;
        prior.vol_coef_cov = 10.0 * Eigen::MatrixXd::Identity(1 + vol_exo, 1 + vol_exo);
        prior.vol_coef_cov(0, 0) = 0.01;
        prior.shape_coef_mean = Eigen::VectorXd::Zero(1 + shape_exo);
        prior.shape_coef_mean[0] = 1.0;
        prior.shape_coef_cov = 10.0 * Eigen::MatrixXd::Identity(1 + shape_exo, 1 + shape_exo);
        prior.shape_coef_cov(0, 0) = 0.01;
        return prior;
    }
};

struct McmcOptions {
    int iters = 10000;
    int burn_in = 5000;
    int thin = 1;
    int particles = 30;
    PathMethod path_method = PathMethod::Pgas;
    std::uint64_t seed = 0;
    bool enforce_stationarity = false;
    bool store_mixing = false;

    void validate() const {
        if (iters <= burn_in) throw std::invalid_argument("McmcOptions: iters must exceed burn_in");
        if (burn_in < 0 || thin < 1) throw std::invalid_argument("McmcOptions: bad chain lengths");
        if (particles < 2) throw std::invalid_argument("McmcOptions: need at least 2 particles");
    }
};

struct UniParams {
    Eigen::VectorXd pi;
    Eigen::VectorXd vol_coefs;
    Eigen::VectorXd shape_coefs;
    double sig2_eta = 0.04;
    double sig2_xi = 0.04;

    double phi_h() const { return vol_coefs[0]; }
    double phi_lambda() const { return shape_coefs[0]; }
};

struct UniDraw {
    UniParams params;
    double log_h0;
    double lambda0;
    Eigen::VectorXd h;
    Eigen::VectorXd lambda;
    Eigen::VectorXd v;
    Eigen::VectorXd o;
};

struct ChainMeta {
    std::uint64_t seed = 0;
    int iters = 0;
    int burn_in = 0;
    int thin = 0;
    int particles = 0;
    PathMethod path_method = PathMethod::Pgas;
    ShockFamily family = ShockFamily::SkewNormal;
    double nu = 0.0;
};

struct PosteriorDraws {
    std::vector<UniDraw> draws;
    ChainMeta meta;

    int size() const { return static_cast<int>(draws.size()); }
};

namespace detail {

/// beta' w_t shift entering the transition into state t (1-based), with the
/// coefficients taken from the current chain state rather than the spec.
inline double coef_shift(const StateEqSpec& eq, const Eigen::VectorXd& coefs, int t) {
    const int k = eq.exo_dim();
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += coefs[1 + j] * (*eq.exo_series)(t - 1, j);
    return s;
}

inline Eigen::VectorXd mvn_draw(const Eigen::VectorXd& mean, const Eigen::LLT<Eigen::MatrixXd>& llt_precision,
                                Rng& rng) {
    Eigen::VectorXd z(mean.size());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.normal();
    // precision = L L^T  =>  covariance = L^{-T} L^{-1}; draw = mean + L^{-T} z
    return mean + llt_precision.matrixU().solve(z);
}

} // namespace detail

/// Step 1 (and its Skew-t variant): exact truncated-normal draw of the
/// mixing variables v_t given everything else,
///   v_t ~ TN_[0,inf)( delta_t sqrt(o_t) (eps_t - zeta_t) / omega_t, 1 - delta_t^2 )
/// with eps_t = (y_t - x_t' pi) / sqrt(h_t).
inline void draw_mixing_v(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const ShockSpec& shock, const Eigen::VectorXd& pi, LatentPaths& paths,
                          Rng& rng) {
    const int T = static_cast<int>(y.size());
    for (int t = 0; t < T; ++t) {
        const auto sp = shock_params(shock, paths.lambda[t]);
        const double eps = (y[t] - X.row(t).dot(pi)) / std::sqrt(paths.h[t]);
        const double m = sp.delta * std::sqrt(paths.o[t]) * (eps - sp.zeta) / sp.omega;
        const double sd = std::sqrt(1.0 - sp.delta * sp.delta);
        paths.v[t] = rng.truncated_normal_lb0(m, sd);
    }
}

/// Skew-t mixing variable o_t: independence MH with a
/// Gamma((nu+1)/2, [nu + (eps_t - zeta_t)^2 / (omega_t^2 (1-delta_t^2))]/2)
/// proposal; the acceptance probability is
///   exp( c_t (sqrt(o*) - sqrt(o_m)) ),  c_t = (eps_t - zeta_t) delta_t v_t /
///                                             (omega_t (1 - delta_t^2)).
inline void draw_mixing_o(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const ShockSpec& shock, const Eigen::VectorXd& pi, LatentPaths& paths,
                          Rng& rng) {
    const int T = static_cast<int>(y.size());
    const double nu = shock.nu;
    for (int t = 0; t < T; ++t) {
        const auto sp = shock_params(shock, paths.lambda[t]);
        const double one_m_d2 = 1.0 - sp.delta * sp.delta;
        const double eps = (y[t] - X.row(t).dot(pi)) / std::sqrt(paths.h[t]);
        const double resid = eps - sp.zeta;
        const double rate = 0.5 * (nu + resid * resid / (sp.omega * sp.omega * one_m_d2));
        const double proposal = rng.gamma(0.5 * (nu + 1.0), rate);
        const double c = resid * sp.delta * paths.v[t] / (sp.omega * one_m_d2);
        const double log_accept = c * (std::sqrt(proposal) - std::sqrt(paths.o[t]));
        if (log_accept >= 0.0 || std::log(rng.uniform_pos()) < log_accept) {
            paths.o[t] = proposal;
        }
    }
}

/// Regression coefficients: exact draw from the GLS-form normal conditional
/// with the skew-adjusted target
///   y~_t = y_t - sqrt(h_t) (zeta_t + omega_t delta_t v_t / sqrt(o_t)),
///   sigma^2_t = h_t omega_t^2 (1 - delta_t^2) / o_t.
inline Eigen::VectorXd draw_pi(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                               const ShockSpec& shock, const LatentPaths& paths,
                               const Eigen::VectorXd& prior_mean, const Eigen::MatrixXd& prior_cov,
                               Rng& rng) {
    const int T = static_cast<int>(y.size());
    const int p = static_cast<int>(X.cols());
    Eigen::MatrixXd precision = prior_cov.inverse();
    Eigen::VectorXd rhs = precision * prior_mean;
    for (int t = 0; t < T; ++t) {
        const auto sp = shock_params(shock, paths.lambda[t]);
        const double sqrt_h = std::sqrt(paths.h[t]);
        const double ytilde =
            y[t] - sqrt_h * (sp.zeta + sp.omega * sp.delta * paths.v[t] / std::sqrt(paths.o[t]));
        const double sig2 =
            paths.h[t] * sp.omega * sp.omega * (1.0 - sp.delta * sp.delta) / paths.o[t];
        precision.noalias() += X.row(t).transpose() * X.row(t) / sig2;
        rhs.noalias() += X.row(t).transpose() * (ytilde / sig2);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("draw_pi: posterior precision not positive definite");
    const Eigen::VectorXd mean = llt.solve(rhs);
    (void)p;
    return detail::mvn_draw(mean, llt, rng);
}

/// State-equation coefficients (phi and any exogenous coefficients, drawn
/// jointly): conjugate normal regression of s_t on [s_{t-1}, w_t].
/// With enforce_stationarity the draw is repeated while |phi| >= 1, up to
/// 100 times, after which the previous value is kept.
inline Eigen::VectorXd draw_state_coefs(double s0, std::span<const double> path,
                                        const StateEqSpec& eq, double sigma2,
                                        const Eigen::VectorXd& prior_mean,
                                        const Eigen::MatrixXd& prior_cov, Rng& rng,
                                        bool enforce_stationarity = false,
                                        const Eigen::VectorXd* previous = nullptr) {
    const int T = static_cast<int>(path.size());
    const int k = 1 + eq.exo_dim();
    Eigen::MatrixXd precision = prior_cov.inverse();
    Eigen::VectorXd rhs = precision * prior_mean;
    Eigen::VectorXd r(k);
    for (int t = 1; t <= T; ++t) {
        r[0] = (t == 1) ? s0 : path[t - 2];
        for (int j = 0; j < eq.exo_dim(); ++j) r[1 + j] = (*eq.exo_series)(t - 1, j);
        precision.noalias() += r * r.transpose() / sigma2;
        rhs.noalias() += r * (path[t - 1] / sigma2);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("draw_state_coefs: posterior precision not positive definite");
    const Eigen::VectorXd mean = llt.solve(rhs);
    Eigen::VectorXd draw = detail::mvn_draw(mean, llt, rng);
    if (enforce_stationarity) {
        for (int attempt = 0; attempt < 100 && std::fabs(draw[0]) >= 1.0; ++attempt) {
            draw = detail::mvn_draw(mean, llt, rng);
        }
        if (std::fabs(draw[0]) >= 1.0 && previous != nullptr) draw = *previous;
    }
    return draw;
}

/// Innovation variance: exact InverseGamma(shape0 + T/2, scale0 + SSR/2)
/// with residuals s_t - phi s_{t-1} - beta' w_t.
inline double draw_sigma2(double s0, std::span<const double> path, const StateEqSpec& eq,
                          const Eigen::VectorXd& coefs, double prior_shape, double prior_scale,
                          Rng& rng) {
    const int T = static_cast<int>(path.size());
    double ssr = 0.0;
    for (int t = 1; t <= T; ++t) {
        const double prev = (t == 1) ? s0 : path[t - 2];
        double e = path[t - 1] - coefs[0] * prev;
        for (int j = 0; j < eq.exo_dim(); ++j) e -= coefs[1 + j] * (*eq.exo_series)(t - 1, j);
        ssr += e * e;
    }
    return rng.inverse_gamma(prior_shape + 0.5 * T, prior_scale + 0.5 * ssr);
}

/// Initial state: normal conditional combining the prior with the back-cast
/// from the first transition, s_1 = phi s_0 + beta' w_1 + innovation.
/// phi = 0 carries no information about s_0, so the prior is drawn directly.
inline double draw_initial_state(double s1, double exo_shift1, double phi, double sigma2,
                                 double prior_mean, double prior_var, Rng& rng) {
    if (std::fabs(phi) < 1e-12) return rng.normal(prior_mean, std::sqrt(prior_var));
    const double like_prec = phi * phi / sigma2;
    const double post_var = 1.0 / (1.0 / prior_var + like_prec);
    const double post_mean = post_var * (prior_mean / prior_var + phi * (s1 - exo_shift1) / sigma2);
    return rng.normal(post_mean, std::sqrt(post_var));
}

namespace detail {

/// Volatility path update. The state is log h_t; the observation weight is
/// the conditionally-Gaussian density of y_t given (lambda_t, v_t, o_t).
inline void update_vol_path(const Eigen::VectorXd& y_eff, const ShockSpec& shock,
                            LatentPaths& paths, const StateEqSpec& vol_eq,
                            const Eigen::VectorXd& vol_coefs, double sig2_eta, PathMethod method,
                            int K, Rng& rng) {
    const int T = static_cast<int>(y_eff.size());
    const double phi = vol_coefs[0];
    const double sd = std::sqrt(sig2_eta);

    // shock moments are fixed during the h sweep
    Eigen::VectorXd mean_eps(T), log_var_eps(T), var_eps(T);
    for (int t = 0; t < T; ++t) {
        const auto sp = shock_params(shock, paths.lambda[t]);
        mean_eps[t] = sp.zeta + sp.delta * sp.omega * paths.v[t] / std::sqrt(paths.o[t]);
        var_eps[t] = sp.omega * sp.omega * (1.0 - sp.delta * sp.delta) / paths.o[t];
        log_var_eps[t] = std::log(var_eps[t]);
    }
    const auto shift = [&](int t) { return coef_shift(vol_eq, vol_coefs, t); };
    const auto obs_loglik = [&](double s, int t) {
        const double e = y_eff[t - 1] - std::exp(0.5 * s) * mean_eps[t - 1];
        return -0.5 * (s + log_var_eps[t - 1] + e * e / (std::exp(s) * var_eps[t - 1]));
    };

    std::vector<double> logh(T);
    for (int t = 0; t < T; ++t) logh[t] = std::log(paths.h[t]);

    if (method == PathMethod::Pgas) {
        const double s0 = paths.log_h0;
        auto spec = make_particle_step(
            K, std::span<const double>(logh),
            [&, s0](Rng& r) { return phi * s0 + shift(1) + sd * r.normal(); },
            [&](double prev, int t, Rng& r) { return phi * prev + shift(t) + sd * r.normal(); },
            [&](double cur, double prev, int t) {
                const double e = cur - phi * prev - shift(t);
                return -0.5 * e * e / sig2_eta;
            },
            obs_loglik);
        logh = csmc_ancestor_sampling(spec, rng);
    } else {
        mh_path_sweep(std::span<double>(logh), paths.log_h0, phi, sig2_eta, shift, obs_loglik,
                      rng);
    }
    for (int t = 0; t < T; ++t) paths.h[t] = std::exp(logh[t]);
}

/// Shape path update; the state is lambda_t itself.
inline void update_shape_path(const Eigen::VectorXd& y_eff, const ShockSpec& shock,
                              LatentPaths& paths, const StateEqSpec& shape_eq,
                              const Eigen::VectorXd& shape_coefs, double sig2_xi,
                              PathMethod method, int K, Rng& rng) {
    const int T = static_cast<int>(y_eff.size());
    const double phi = shape_coefs[0];
    const double sd = std::sqrt(sig2_xi);

    const auto shift = [&](int t) { return coef_shift(shape_eq, shape_coefs, t); };
    const auto obs_loglik = [&](double lam, int t) {
        const auto sp = shock_params(shock, lam);
        const double h = paths.h[t - 1];
        const double o = paths.o[t - 1];
        const double mean =
            std::sqrt(h) * (sp.zeta + sp.delta * sp.omega * paths.v[t - 1] / std::sqrt(o));
        const double var = h * sp.omega * sp.omega * (1.0 - sp.delta * sp.delta) / o;
        const double e = y_eff[t - 1] - mean;
        return -0.5 * (std::log(var) + e * e / var);
    };

    std::vector<double> lam(paths.lambda.data(), paths.lambda.data() + T);
    if (method == PathMethod::Pgas) {
        const double l0 = paths.lambda0;
        auto spec = make_particle_step(
            K, std::span<const double>(lam),
            [&, l0](Rng& r) { return phi * l0 + shift(1) + sd * r.normal(); },
            [&](double prev, int t, Rng& r) { return phi * prev + shift(t) + sd * r.normal(); },
            [&](double cur, double prev, int t) {
                const double e = cur - phi * prev - shift(t);
                return -0.5 * e * e / sig2_xi;
            },
            obs_loglik);
        lam = csmc_ancestor_sampling(spec, rng);
    } else {
        mh_path_sweep(std::span<double>(lam), paths.lambda0, phi, sig2_xi, shift, obs_loglik, rng);
    }
    for (int t = 0; t < T; ++t) paths.lambda[t] = lam[t];
}

inline UniParams initial_params(const UniModelSpec& model, const UniPriorSpec& prior,
                                const Eigen::VectorXd& y) {
    UniParams params;
    const int p = model.n_regressors();
    if (p > 0) {
        params.pi = model.regressors.colPivHouseholderQr().solve(y);
    } else {
        params.pi = Eigen::VectorXd(0);
    }
    params.vol_coefs = Eigen::VectorXd::Zero(prior.vol_coef_mean.size());
    params.vol_coefs[0] = 0.9;
    params.shape_coefs = Eigen::VectorXd::Zero(prior.shape_coef_mean.size());
    params.shape_coefs[0] = 0.9;
    params.sig2_eta = prior.sig2_eta_scale / std::max(prior.sig2_eta_shape - 1.0, 1.0);
    params.sig2_xi = prior.sig2_xi_scale / std::max(prior.sig2_xi_shape - 1.0, 1.0);
    return params;
}

} // namespace detail

struct UniSimulation {
    Eigen::VectorXd y;
    LatentPaths paths;
};

/// Observation draw given fixed latent paths and mixing variables; only the
/// Gaussian component z_t is refreshed.
inline Eigen::VectorXd simulate_obs_given_paths(const Eigen::MatrixXd& X,
                                                const Eigen::VectorXd& pi, const ShockSpec& shock,
                                                const LatentPaths& paths, Rng& rng) {
    const int T = static_cast<int>(X.rows());
    Eigen::VectorXd y(T);
    for (int t = 0; t < T; ++t) {
        const auto sp = shock_params(shock, paths.lambda[t]);
        const double so = std::sqrt(paths.o[t]);
        const double eps = sp.zeta + sp.delta * sp.omega * paths.v[t] / so +
                           std::sqrt(1.0 - sp.delta * sp.delta) * sp.omega * rng.normal() / so;
        y[t] = (pi.size() > 0 ? X.row(t).dot(pi) : 0.0) + std::sqrt(paths.h[t]) * eps;
    }
    return y;
}

/// Forward simulation of the full model on a fixed regressor matrix.
/// vol_eq/shape_eq carry the true phi, sigma2 and any exogenous structure.
inline UniSimulation simulate_uni(const Eigen::MatrixXd& X, const Eigen::VectorXd& pi,
                                  const ShockSpec& shock, const StateEqSpec& vol_eq,
                                  const StateEqSpec& shape_eq, double log_h0, double lambda0,
                                  Rng& rng) {
    const int T = static_cast<int>(X.rows());
    UniSimulation sim;
    sim.paths.h.resize(T);
    sim.paths.lambda.resize(T);
    sim.paths.v.resize(T);
    sim.paths.o.resize(T);
    sim.paths.log_h0 = log_h0;
    sim.paths.lambda0 = lambda0;

    double logh = log_h0, lam = lambda0;
    const double sd_eta = std::sqrt(vol_eq.sigma2);
    const double sd_xi = std::sqrt(shape_eq.sigma2);
    for (int t = 1; t <= T; ++t) {
        logh = vol_eq.phi * logh + vol_eq.exo_shift(t) + sd_eta * rng.normal();
        lam = shape_eq.phi * lam + shape_eq.exo_shift(t) + sd_xi * rng.normal();
        sim.paths.h[t - 1] = std::exp(logh);
        sim.paths.lambda[t - 1] = lam;
        sim.paths.v[t - 1] = rng.truncated_normal_lb0(0.0, 1.0);
        sim.paths.o[t - 1] = shock.is_skew_t() ? rng.gamma(0.5 * shock.nu, 0.5 * shock.nu) : 1.0;
    }
    sim.y = simulate_obs_given_paths(X, pi, shock, sim.paths, rng);
    return sim;
}

/// One full sweep of the Gibbs kernel (Skew-t mixing step first when
/// applicable, then v, pi, sigma2_eta, sigma2_xi, phi_h, phi_lambda, h_0,
/// the h path, lambda_0, and the lambda path).
inline void gibbs_sweep(const UniModelSpec& model, const UniPriorSpec& prior,
                        const Eigen::VectorXd& y, const McmcOptions& opts, UniParams& params,
                        LatentPaths& paths, Rng& rng) {
    if (model.shock.is_skew_t()) {
        draw_mixing_o(y, model.regressors, model.shock, params.pi, paths, rng);
    }
    draw_mixing_v(y, model.regressors, model.shock, params.pi, paths, rng);
    if (model.n_regressors() > 0) {
        params.pi = draw_pi(y, model.regressors, model.shock, paths, prior.pi_mean, prior.pi_cov,
                            rng);
    }

    const int T = model.sample_size();
    std::vector<double> logh(T);
    for (int t = 0; t < T; ++t) logh[t] = std::log(paths.h[t]);

    params.sig2_eta = draw_sigma2(paths.log_h0, logh, model.vol_eq, params.vol_coefs,
                                  prior.sig2_eta_shape, prior.sig2_eta_scale, rng);
    params.sig2_xi = draw_sigma2(paths.lambda0,
                                 std::span<const double>(paths.lambda.data(), T), model.shape_eq,
                                 params.shape_coefs, prior.sig2_xi_shape, prior.sig2_xi_scale, rng);
    params.vol_coefs = draw_state_coefs(paths.log_h0, logh, model.vol_eq, params.sig2_eta,
                                        prior.vol_coef_mean, prior.vol_coef_cov, rng,
                                        opts.enforce_stationarity, &params.vol_coefs);
    params.shape_coefs = draw_state_coefs(paths.lambda0,
                                          std::span<const double>(paths.lambda.data(), T),
                                          model.shape_eq, params.sig2_xi, prior.shape_coef_mean,
                                          prior.shape_coef_cov, rng, opts.enforce_stationarity,
                                          &params.shape_coefs);

    paths.log_h0 = draw_initial_state(std::log(paths.h[0]),
                                      detail::coef_shift(model.vol_eq, params.vol_coefs, 1),
                                      params.phi_h(), params.sig2_eta, prior.logh0_mean,
                                      prior.logh0_var, rng);

    const Eigen::VectorXd y_eff =
        model.n_regressors() > 0 ? (y - model.regressors * params.pi).eval() : y;
    detail::update_vol_path(y_eff, model.shock, paths, model.vol_eq, params.vol_coefs,
                            params.sig2_eta, opts.path_method, opts.particles, rng);

    paths.lambda0 = draw_initial_state(paths.lambda[0],
                                       detail::coef_shift(model.shape_eq, params.shape_coefs, 1),
                                       params.phi_lambda(), params.sig2_xi, prior.lambda0_mean,
                                       prior.lambda0_var, rng);
    detail::update_shape_path(y_eff, model.shock, paths, model.shape_eq, params.shape_coefs,
                              params.sig2_xi, opts.path_method, opts.particles, rng);
}

/// Full MCMC run. Retains (iters - burn_in) / thin draws in order.
inline PosteriorDraws run_chain(const UniModelSpec& model, const UniPriorSpec& prior,
                                const Eigen::VectorXd& y, const McmcOptions& opts) {
    model.validate();
    opts.validate();
    if (y.size() != model.sample_size())
        throw std::invalid_argument("run_chain: data/regressor length mismatch");

    Rng rng(opts.seed);
    const int T = model.sample_size();

    UniParams params = detail::initial_params(model, prior, y);
    const Eigen::VectorXd resid =
        model.n_regressors() > 0 ? (y - model.regressors * params.pi).eval() : y;
    const double r2 = std::max(resid.squaredNorm() / std::max(T - 1, 1), 1e-8);
    LatentPaths paths = LatentPaths::constant(T, r2);

    PosteriorDraws out;
    out.meta = {opts.seed,        opts.iters,         opts.burn_in, opts.thin,
                opts.particles,   opts.path_method,   model.shock.family, model.shock.nu};
    out.draws.reserve((opts.iters - opts.burn_in) / opts.thin + 1);

    for (int m = 0; m < opts.iters; ++m) {
        try {
            gibbs_sweep(model, prior, y, opts, params, paths, rng);
        } catch (const ParticleCollapse& e) {
            throw ChainError(std::string("particle collapse: ") + e.what(), m);
        } catch (const std::runtime_error& e) {
            throw ChainError(e.what(), m);
        }
        if (m >= opts.burn_in && (m - opts.burn_in) % opts.thin == 0) {
            UniDraw d;
            d.params = params;
            d.log_h0 = paths.log_h0;
            d.lambda0 = paths.lambda0;
            d.h = paths.h;
            d.lambda = paths.lambda;
            if (opts.store_mixing) {
                d.v = paths.v;
                d.o = paths.o;
            }
            out.draws.push_back(std::move(d));
        }
    }
    return out;
}

} // namespace skewvol

#endif // SKEWVOL_UNI_SAMPLER_HPP
