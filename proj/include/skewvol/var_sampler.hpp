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

#ifndef SKEWVOL_VAR_SAMPLER_HPP
#define SKEWVOL_VAR_SAMPLER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "skewvol/uni_sampler.hpp"

namespace skewvol {

/// VAR(p) with a lower-unitriangular contemporaneous matrix and one
/// volatility/shape state pair per equation:
///   y_t = Pi' X_t + A^{-1} H_t^{1/2} eps_t,   eps_it constrained skew shocks.
/// Equation i's shape_eq (or vol_eq) may carry exogenous regressors, e.g. a
/// lag of another endogenous variable.
struct VarEquationSpec {
    StateEqSpec vol_eq;
    StateEqSpec shape_eq;
};

struct VarModelSpec {
    int n_vars = 2;
    int lags = 1;
    bool intercept = true;
    ShockSpec shock;
    std::vector<VarEquationSpec> equations;

    int n_coef() const { return (intercept ? 1 : 0) + n_vars * lags; }

    void validate(int T) const {
        // n_vars = 1 is admitted as the single-equation degeneracy; it must
        // reproduce the univariate sampler and is exercised by the tests
        if (n_vars < 1) throw std::invalid_argument("VarModelSpec: need at least 1 variable");
        if (lags < 1) throw std::invalid_argument("VarModelSpec: need at least 1 lag");
        if (static_cast<int>(equations.size()) != n_vars)
            throw std::invalid_argument("VarModelSpec: one equation spec per variable required");
        if (T <= n_vars * lags + 1)
            throw std::invalid_argument("VarModelSpec: sample too short");
        for (const auto& eq : equations) {
            eq.vol_eq.validate(T);
            eq.shape_eq.validate(T);
        }
    }
};

/// Per-equation state-block priors (same defaults as the univariate model).
struct EquationPriors {
    Eigen::VectorXd vol_coef_mean;
    Eigen::MatrixXd vol_coef_cov;
    Eigen::VectorXd shape_coef_mean;
    Eigen::MatrixXd shape_coef_cov;
    double sig2_eta_shape = 5.0;
    double sig2_eta_scale = 0.16;
    double sig2_xi_shape = 5.0;
    double sig2_xi_scale = 0.16;
    double logh0_mean = 0.0;
    double logh0_var = 100.0;
    double lambda0_mean = 0.0;
    double lambda0_var = 10.0;

    static EquationPriors defaults(int vol_exo = 0, int shape_exo = 0) {
        EquationPriors p;
        p.vol_coef_mean = Eigen::VectorXd::Zero(1 + vol_exo);
        p.vol_coef_mean[0] = 1.0;
        p.vol_coef_cov = 10.0 * Eigen::MatrixXd::Identity(1 + vol_exo, 1 + vol_exo);
        p.vol_coef_cov(0, 0) = 0.01;
        p.shape_coef_mean = Eigen::VectorXd::Zero(1 + shape_exo);
        p.shape_coef_mean[0] = 1.0;
        p.shape_coef_cov = 10.0 * Eigen::MatrixXd::Identity(1 + shape_exo, 1 + shape_exo);
        p.shape_coef_cov(0, 0) = 0.01;
        return p;
    }
};

struct VarPriorSpec {
    Eigen::MatrixXd pi_mean;     // k x N, column j = prior mean of equation j
    Eigen::VectorXd pi_var;      // length k*N, diagonal of V_Pi in vec(Pi) order
    double a_mean = 0.0;
    double a_var = 100.0;        // free elements of A ~ N(0, 100)
    std::vector<EquationPriors> equations;

    static VarPriorSpec flat_defaults(const VarModelSpec& model, double coef_var = 10.0) {
        VarPriorSpec prior;
        const int k = model.n_coef();
        prior.pi_mean = Eigen::MatrixXd::Zero(k, model.n_vars);
        prior.pi_var = Eigen::VectorXd::Constant(k * model.n_vars, coef_var);
        for (const auto& eq : model.equations) {
            prior.equations.push_back(
                EquationPriors::defaults(eq.vol_eq.exo_dim(), eq.shape_eq.exo_dim()));
        }
        return prior;
    }
};

struct VarMcmcOptions : McmcOptions {
    bool triangular_pi = false;          // equation-by-equation Pi draw
    bool reverse_equation_order = false; // update latents for i = N..1
};

struct VarState {
    Eigen::MatrixXd Pi;                       // k x N
    std::vector<Eigen::VectorXd> a_rows;      // row i holds i free elements (i = 1..N-1)
    std::vector<LatentPaths> eq_paths;
    std::vector<Eigen::VectorXd> vol_coefs;
    std::vector<Eigen::VectorXd> shape_coefs;
    Eigen::VectorXd sig2_eta;
    Eigen::VectorXd sig2_xi;

    Eigen::MatrixXd A(int N) const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(N, N);
        for (int i = 1; i < N; ++i)
            for (int j = 0; j < i; ++j) a(i, j) = a_rows[i - 1][j];
        return a;
    }
};

struct VarDraw {
    Eigen::MatrixXd Pi;
    std::vector<Eigen::VectorXd> a_rows;
    std::vector<Eigen::VectorXd> vol_coefs;
    std::vector<Eigen::VectorXd> shape_coefs;
    Eigen::VectorXd sig2_eta;
    Eigen::VectorXd sig2_xi;
    Eigen::VectorXd log_h0;  // per equation
    Eigen::VectorXd lambda0;
    Eigen::MatrixXd h;       // T x N
    Eigen::MatrixXd lambda;  // T x N
};

struct VarPosteriorDraws {
    std::vector<VarDraw> draws;
    ChainMeta meta;
    std::vector<std::string> variable_order;

    int size() const { return static_cast<int>(draws.size()); }
};

/// Builds the lagged design: returns effective observations Y (T x N) and
/// X (T x k) with rows [1, y_{t-1}', ..., y_{t-p}'].
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_var_design(const Eigen::MatrixXd& raw,
                                                                    int lags,
                                                                    bool intercept = true) {
    const int T_all = static_cast<int>(raw.rows());
    const int N = static_cast<int>(raw.cols());
    if (T_all <= lags) throw std::invalid_argument("build_var_design: sample shorter than lags");
    const int T = T_all - lags;
    const int k = (intercept ? 1 : 0) + N * lags;
    Eigen::MatrixXd Y(T, N), X(T, k);
    for (int t = 0; t < T; ++t) {
        Y.row(t) = raw.row(t + lags);
        int c = 0;
        if (intercept) X(t, c++) = 1.0;
        for (int l = 1; l <= lags; ++l)
            for (int j = 0; j < N; ++j) X(t, c++) = raw(t + lags - l, j);
    }
    return {Y, X};
}

namespace detail {

/// Per-period shock moments for equation i given the current latents:
/// mean_it = sqrt(h)(zeta + omega delta v / sqrt(o)),
/// var_it  = h omega^2 (1 - delta^2) / o.
struct EqObsMoments {
    Eigen::MatrixXd mean; // T x N
    Eigen::MatrixXd var;  // T x N
};

inline EqObsMoments eq_obs_moments(const ShockSpec& shock, const std::vector<LatentPaths>& paths,
                                   int T, int N) {
    EqObsMoments m;
    m.mean.resize(T, N);
    m.var.resize(T, N);
    for (int i = 0; i < N; ++i) {
        for (int t = 0; t < T; ++t) {
            const auto sp = shock_params(shock, paths[i].lambda[t]);
            const double h = paths[i].h[t];
            const double o = paths[i].o[t];
            m.mean(t, i) =
                std::sqrt(h) * (sp.zeta + sp.delta * sp.omega * paths[i].v[t] / std::sqrt(o));
            m.var(t, i) = h * sp.omega * sp.omega * (1.0 - sp.delta * sp.delta) / o;
        }
    }
    return m;
}

} // namespace detail

/// Joint draw of vec(Pi) from its normal full conditional:
///   precision = V_Pi^{-1} + sum_t Sigma_t^{-1} (x) X_t X_t',
///   Sigma_t   = A^{-1} D_t A'^{-1},  D_t diagonal with the shock variances,
/// and the skew-adjusted target ytilde_t = y_t - A^{-1} m_t.
inline Eigen::MatrixXd draw_Pi(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                               const VarModelSpec& model, const VarState& state,
                               const VarPriorSpec& prior, Rng& rng) {
    const int T = static_cast<int>(Y.rows());
    const int N = model.n_vars;
    const int k = model.n_coef();
    const auto mom = detail::eq_obs_moments(model.shock, state.eq_paths, T, N);
    const Eigen::MatrixXd A = state.A(N);
    const Eigen::MatrixXd Ainv = A.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(N, N));

    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N * k, N * k);
    for (int idx = 0; idx < N * k; ++idx) P(idx, idx) = 1.0 / prior.pi_var[idx];
    Eigen::VectorXd rhs(N * k);
    for (int j = 0; j < N; ++j)
        rhs.segment(j * k, k) =
            prior.pi_mean.col(j).array() / prior.pi_var.segment(j * k, k).array();

    for (int t = 0; t < T; ++t) {
        // Sigma_t^{-1} = A' D_t^{-1} A
        const Eigen::VectorXd dinv = mom.var.row(t).cwiseInverse();
        const Eigen::MatrixXd Sinv = A.transpose() * dinv.asDiagonal() * A;
        const Eigen::VectorXd ytilde = Y.row(t).transpose() - Ainv * mom.mean.row(t).transpose();
        const Eigen::VectorXd xt = X.row(t);
        const Eigen::MatrixXd outer = xt * xt.transpose();
        const Eigen::VectorXd sy = Sinv * ytilde;
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < N; ++i)
                P.block(j * k, i * k, k, k).noalias() += Sinv(j, i) * outer;
            rhs.segment(j * k, k).noalias() += sy[j] * xt;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("draw_Pi: posterior precision not positive definite");
    const Eigen::VectorXd mean = llt.solve(rhs);
    const Eigen::VectorXd draw = detail::mvn_draw(mean, llt, rng);
    return Eigen::Map<const Eigen::MatrixXd>(draw.data(), k, N);
}

/// Equation-by-equation Pi draw (triangular algorithm). Draw-for-draw it
/// targets the same conditional as draw_Pi: each equation's coefficient
/// block is sampled from its exact full conditional given the other blocks,
/// exploiting the triangular structure so only rows i >= j involve pi_j.
inline Eigen::MatrixXd draw_Pi_triangular(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                                          const VarModelSpec& model, const VarState& state,
                                          const VarPriorSpec& prior, Rng& rng) {
    const int T = static_cast<int>(Y.rows());
    const int N = model.n_vars;
    const int k = model.n_coef();
    const auto mom = detail::eq_obs_moments(model.shock, state.eq_paths, T, N);
    const Eigen::MatrixXd A = state.A(N);

    Eigen::MatrixXd Pi = state.Pi;
    Eigen::MatrixXd E = Y - X * Pi; // residuals, updated column by column

    for (int j = 0; j < N; ++j) {
        Eigen::MatrixXd prec = Eigen::MatrixXd::Zero(k, k);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        for (int l = 0; l < k; ++l) {
            const double pv = prior.pi_var[j * k + l];
            prec(l, l) = 1.0 / pv;
            rhs[l] = prior.pi_mean(l, j) / pv;
        }
        for (int t = 0; t < T; ++t) {
            double w = 0.0, q = 0.0;
            for (int i = j; i < N; ++i) {
                const double aij = A(i, j);
                if (aij == 0.0) continue;
                // row i of A e_t with the j-th residual replaced by y_jt
                double m = aij * Y(t, j) - mom.mean(t, i);
                for (int l = 0; l <= i; ++l)
                    if (l != j) m += A(i, l) * E(t, l);
                const double dinv = 1.0 / mom.var(t, i);
                w += aij * aij * dinv;
                q += aij * m * dinv;
            }
            const Eigen::VectorXd xt = X.row(t);
            prec.noalias() += w * (xt * xt.transpose());
            rhs.noalias() += q * xt;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(prec);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("draw_Pi_triangular: precision not positive definite");
        Pi.col(j) = detail::mvn_draw(llt.solve(rhs), llt, rng);
        E.col(j) = Y.col(j) - X * Pi.col(j);
    }
    return Pi;
}

/// Free elements of A row by row: weighted regression of the skew-adjusted
/// orthogonalized residual on the negatives of the preceding residuals.
inline void draw_A(const Eigen::MatrixXd& U, const VarModelSpec& model, VarState& state,
                   const VarPriorSpec& prior, Rng& rng) {
    const int T = static_cast<int>(U.rows());
    const int N = model.n_vars;
    const auto mom = detail::eq_obs_moments(model.shock, state.eq_paths, T, N);
    for (int i = 1; i < N; ++i) {
        Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(i, i) / prior.a_var;
        Eigen::VectorXd rhs = Eigen::VectorXd::Constant(i, prior.a_mean / prior.a_var);
        for (int t = 0; t < T; ++t) {
            const double dinv = 1.0 / mom.var(t, i);
            const Eigen::VectorXd g = -U.row(t).head(i); // utilde = a_i . g + noise
            const double utilde = U(t, i) - mom.mean(t, i);
            prec.noalias() += dinv * (g * g.transpose());
            rhs.noalias() += dinv * utilde * g;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(prec);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("draw_A: posterior precision not positive definite");
        state.a_rows[i - 1] = detail::mvn_draw(llt.solve(rhs), llt, rng);
    }
}

/// One sweep of the VAR Gibbs kernel in the printed step order: mixing
/// variables per equation ([o] then v), Pi, A, then per-equation
/// sigma2_xi, sigma2_eta, phi_h, phi_lambda, h_0, h path, lambda_0,
/// lambda path on the orthogonalized residuals.
inline void var_gibbs_sweep(const VarModelSpec& model, const VarPriorSpec& prior,
                            const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                            const VarMcmcOptions& opts, VarState& state, Rng& rng) {
    const int T = static_cast<int>(Y.rows());
    const int N = model.n_vars;
    const Eigen::MatrixXd X_empty(T, 0);
    const Eigen::VectorXd pi_empty(0);

    // orthogonalized residuals from the current Pi, A
    Eigen::MatrixXd U = Y - X * state.Pi;
    Eigen::MatrixXd E = U * state.A(N).transpose(); // e_it = (A u_t)_i

    for (int i = 0; i < N; ++i) {
        if (model.shock.is_skew_t()) {
            draw_mixing_o(E.col(i), X_empty, model.shock, pi_empty, state.eq_paths[i], rng);
        }
        draw_mixing_v(E.col(i), X_empty, model.shock, pi_empty, state.eq_paths[i], rng);
    }

    state.Pi = opts.triangular_pi ? draw_Pi_triangular(Y, X, model, state, prior, rng)
                                  : draw_Pi(Y, X, model, state, prior, rng);
    U = Y - X * state.Pi;
    draw_A(U, model, state, prior, rng);
    E = U * state.A(N).transpose();

    for (int step = 0; step < N; ++step) {
        const int i = opts.reverse_equation_order ? N - 1 - step : step;
        auto& paths = state.eq_paths[i];
        const auto& eq = model.equations[i];
        const auto& eqp = prior.equations[i];
        const Eigen::VectorXd e = E.col(i);

        std::vector<double> logh(T);
        for (int t = 0; t < T; ++t) logh[t] = std::log(paths.h[t]);

        state.sig2_xi[i] =
            draw_sigma2(paths.lambda0, std::span<const double>(paths.lambda.data(), T),
                        eq.shape_eq, state.shape_coefs[i], eqp.sig2_xi_shape, eqp.sig2_xi_scale,
                        rng);
        state.sig2_eta[i] = draw_sigma2(paths.log_h0, logh, eq.vol_eq, state.vol_coefs[i],
                                        eqp.sig2_eta_shape, eqp.sig2_eta_scale, rng);
        state.vol_coefs[i] = draw_state_coefs(paths.log_h0, logh, eq.vol_eq, state.sig2_eta[i],
                                              eqp.vol_coef_mean, eqp.vol_coef_cov, rng,
                                              opts.enforce_stationarity, &state.vol_coefs[i]);
        state.shape_coefs[i] = draw_state_coefs(
            paths.lambda0, std::span<const double>(paths.lambda.data(), T), eq.shape_eq,
            state.sig2_xi[i], eqp.shape_coef_mean, eqp.shape_coef_cov, rng,
            opts.enforce_stationarity, &state.shape_coefs[i]);

        paths.log_h0 = draw_initial_state(std::log(paths.h[0]),
                                          detail::coef_shift(eq.vol_eq, state.vol_coefs[i], 1),
                                          state.vol_coefs[i][0], state.sig2_eta[i],
                                          eqp.logh0_mean, eqp.logh0_var, rng);
        detail::update_vol_path(e, model.shock, paths, eq.vol_eq, state.vol_coefs[i],
                                state.sig2_eta[i], opts.path_method, opts.particles, rng);
        paths.lambda0 = draw_initial_state(
            paths.lambda[0], detail::coef_shift(eq.shape_eq, state.shape_coefs[i], 1),
            state.shape_coefs[i][0], state.sig2_xi[i], eqp.lambda0_mean, eqp.lambda0_var, rng);
        detail::update_shape_path(e, model.shock, paths, eq.shape_eq, state.shape_coefs[i],
                                  state.sig2_xi[i], opts.path_method, opts.particles, rng);
    }
}

inline VarState initial_var_state(const VarModelSpec& model, const VarPriorSpec& prior,
                                  const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X) {
    const int T = static_cast<int>(Y.rows());
    const int N = model.n_vars;
    VarState state;
    state.Pi = X.colPivHouseholderQr().solve(Y);
    const Eigen::MatrixXd resid = Y - X * state.Pi;
    for (int i = 1; i < N; ++i) state.a_rows.push_back(Eigen::VectorXd::Zero(i));
    state.sig2_eta.resize(N);
    state.sig2_xi.resize(N);
    for (int i = 0; i < N; ++i) {
        const double r2 = std::max(resid.col(i).squaredNorm() / std::max(T - 1, 1), 1e-8);
        state.eq_paths.push_back(LatentPaths::constant(T, r2));
        state.vol_coefs.push_back(Eigen::VectorXd::Zero(prior.equations[i].vol_coef_mean.size()));
        state.vol_coefs.back()[0] = 0.9;
        state.shape_coefs.push_back(
            Eigen::VectorXd::Zero(prior.equations[i].shape_coef_mean.size()));
        state.shape_coefs.back()[0] = 0.9;
        state.sig2_eta[i] = 0.04;
        state.sig2_xi[i] = 0.04;
    }
    return state;
}

/// Full MCMC for the VAR given raw data (T_all x N); the lagged design is
/// built internally and the first `lags` rows condition the likelihood.
inline VarPosteriorDraws run_var_chain(const VarModelSpec& model, const VarPriorSpec& prior,
                                       const Eigen::MatrixXd& raw, const VarMcmcOptions& opts,
                                       std::vector<std::string> variable_order = {}) {
    const auto [Y, X] = build_var_design(raw, model.lags, model.intercept);
    model.validate(static_cast<int>(Y.rows()));
    opts.validate();

    Rng rng(opts.seed);
    VarState state = initial_var_state(model, prior, Y, X);
    const int T = static_cast<int>(Y.rows());
    const int N = model.n_vars;

    VarPosteriorDraws out;
    out.meta = {opts.seed,      opts.iters,       opts.burn_in,       opts.thin,
                opts.particles, opts.path_method, model.shock.family, model.shock.nu};
    out.variable_order = std::move(variable_order);

    for (int m = 0; m < opts.iters; ++m) {
        try {
            var_gibbs_sweep(model, prior, Y, X, opts, state, rng);
        } catch (const ParticleCollapse& e) {
            throw ChainError(std::string("particle collapse: ") + e.what(), m);
        } catch (const std::runtime_error& e) {
            throw ChainError(e.what(), m);
        }
        if (m >= opts.burn_in && (m - opts.burn_in) % opts.thin == 0) {
            VarDraw d;
            d.Pi = state.Pi;
            d.a_rows = state.a_rows;
            d.vol_coefs = state.vol_coefs;
            d.shape_coefs = state.shape_coefs;
            d.sig2_eta = state.sig2_eta;
            d.sig2_xi = state.sig2_xi;
            d.log_h0.resize(N);
            d.lambda0.resize(N);
            d.h.resize(T, N);
            d.lambda.resize(T, N);
            for (int i = 0; i < N; ++i) {
                d.log_h0[i] = state.eq_paths[i].log_h0;
                d.lambda0[i] = state.eq_paths[i].lambda0;
                d.h.col(i) = state.eq_paths[i].h;
                d.lambda.col(i) = state.eq_paths[i].lambda;
            }
            out.draws.push_back(std::move(d));
        }
    }
    return out;
}

/// Forward simulation of the VAR given true parameters; `pre_sample` holds
/// the `lags` initial rows conditioning the recursion.
struct VarSimulation {
    Eigen::MatrixXd y;          // T x N (excluding the pre-sample)
    std::vector<LatentPaths> eq_paths;
};

inline VarSimulation simulate_var(const VarModelSpec& model, const Eigen::MatrixXd& Pi,
                                  const std::vector<Eigen::VectorXd>& a_rows,
                                  const Eigen::VectorXd& log_h0, const Eigen::VectorXd& lambda0,
                                  const Eigen::MatrixXd& pre_sample, int T, Rng& rng) {
    const int N = model.n_vars;
    const int p = model.lags;
    VarSimulation sim;
    sim.y.resize(T, N);
    for (int i = 0; i < N; ++i) {
        LatentPaths lp;
        lp.h.resize(T);
        lp.lambda.resize(T);
        lp.v.resize(T);
        lp.o.resize(T);
        lp.log_h0 = log_h0[i];
        lp.lambda0 = lambda0[i];
        sim.eq_paths.push_back(lp);
    }
    VarState tmp;
    tmp.a_rows = a_rows;
    const Eigen::MatrixXd A = tmp.A(N);

    std::vector<double> logh(N), lam(N);
    for (int i = 0; i < N; ++i) {
        logh[i] = log_h0[i];
        lam[i] = lambda0[i];
    }
    Eigen::MatrixXd hist = pre_sample; // rolling window of the last p rows
    for (int t = 1; t <= T; ++t) {
        Eigen::VectorXd eps(N);
        for (int i = 0; i < N; ++i) {
            const auto& eq = model.equations[i];
            logh[i] = eq.vol_eq.phi * logh[i] + eq.vol_eq.exo_shift(t) +
                      std::sqrt(eq.vol_eq.sigma2) * rng.normal();
            lam[i] = eq.shape_eq.phi * lam[i] + eq.shape_eq.exo_shift(t) +
                     std::sqrt(eq.shape_eq.sigma2) * rng.normal();
            auto& lp = sim.eq_paths[i];
            lp.h[t - 1] = std::exp(logh[i]);
            lp.lambda[t - 1] = lam[i];
            const auto draw = shock_sample_mixing(model.shock, lam[i], rng);
            lp.v[t - 1] = draw.v;
            lp.o[t - 1] = draw.o;
            eps[i] = draw.x;
        }
        Eigen::VectorXd scaled(N);
        for (int i = 0; i < N; ++i) scaled[i] = std::sqrt(sim.eq_paths[i].h[t - 1]) * eps[i];
        const Eigen::VectorXd u = A.triangularView<Eigen::Lower>().solve(scaled);

        Eigen::VectorXd x(model.n_coef());
        int c = 0;
        if (model.intercept) x[c++] = 1.0;
        for (int l = 1; l <= p; ++l)
            for (int j = 0; j < N; ++j) x[c++] = hist(p - l, j);
        sim.y.row(t - 1) = (Pi.transpose() * x + u).transpose();

        // roll the history window
        for (int r = 0; r + 1 < p; ++r) hist.row(r) = hist.row(r + 1);
        hist.row(p - 1) = sim.y.row(t - 1);
    }
    return sim;
}

} // namespace skewvol

#endif // SKEWVOL_VAR_SAMPLER_HPP
