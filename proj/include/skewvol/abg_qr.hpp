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

#ifndef SKEWVOL_ABG_QR_HPP
#define SKEWVOL_ABG_QR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "skewvol/math/special.hpp"
#include "skewvol/rng.hpp"
#include "skewvol/skewdist.hpp"

namespace skewvol {

/// Predictive quantile regression over a tau grid.
struct QrFit {
    std::vector<double> tau_grid;
    Eigen::MatrixXd betas; // |grid| x p

    Eigen::VectorXd predict(const Eigen::VectorXd& x) const { return betas * x; }
};

inline std::vector<double> default_tau_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 19; ++k) g.push_back(0.05 * k);
    return g;
}

inline double tick_loss(const Eigen::VectorXd& resid, double tau) {
    double s = 0.0;
    for (int i = 0; i < resid.size(); ++i)
        s += resid[i] * (tau - (resid[i] < 0.0 ? 1.0 : 0.0));
    return s;
}

/// Minimizes the tick loss per tau by iteratively reweighted least squares
/// with an annealed smoothing floor (1e-2 down to 1e-10), converging the
/// coefficients to 1e-8.
inline QrFit fit_quantile_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     std::vector<double> tau_grid = default_tau_grid()) {
    const int T = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    if (T <= p) throw std::invalid_argument("fit_quantile_regression: sample too short");
    for (double tau : tau_grid)
        if (!(tau > 0.0 && tau < 1.0))
            throw std::invalid_argument("fit_quantile_regression: tau outside (0,1)");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw std::invalid_argument("fit_quantile_regression: rank-deficient X");

    QrFit fit;
    fit.tau_grid = tau_grid;
    fit.betas.resize(static_cast<int>(tau_grid.size()), p);
    const Eigen::VectorXd beta_ols = qr.solve(y);

    for (std::size_t g = 0; g < tau_grid.size(); ++g) {
        const double tau = tau_grid[g];
        Eigen::VectorXd beta = beta_ols;
        for (double eps = 1e-2; eps >= 0.5e-10; eps *= 0.01) {
            for (int it = 0; it < 200; ++it) {
                Eigen::MatrixXd XtWX = Eigen::MatrixXd::Zero(p, p);
                Eigen::VectorXd XtWy = Eigen::VectorXd::Zero(p);
                const Eigen::VectorXd r = y - X * beta;
                for (int t = 0; t < T; ++t) {
                    const double a = r[t] < 0.0 ? 1.0 - tau : tau;
                    const double w = a / std::max(std::fabs(r[t]), eps);
                    XtWX.noalias() += w * X.row(t).transpose() * X.row(t);
                    XtWy.noalias() += w * X.row(t).transpose() * y[t];
                }
                const Eigen::VectorXd beta_new = XtWX.ldlt().solve(XtWy);
                const double delta = (beta_new - beta).cwiseAbs().maxCoeff();
                beta = beta_new;
                if (delta < 1e-8) break;
            }
        }
        fit.betas.row(g) = beta.transpose();
    }
    return fit;
}

/// Free-parameter Skew-t density used to interpolate fitted quantiles into a
/// full predictive distribution (no zero-mean/unit-variance constraint).
struct SkewTDensity {
    double zeta = 0.0;
    double omega = 1.0;
    double lambda = 0.0;
    double nu = 10.0;

    double logpdf(double x) const {
        return skew_t_std_logpdf((x - zeta) / omega, lambda, nu) - std::log(omega);
    }
    double pdf(double x) const { return std::exp(logpdf(x)); }

    double sample(Rng& rng) const {
        const double delta = delta_of_lambda(lambda);
        const double v = rng.truncated_normal_lb0(0.0, 1.0);
        const double z = rng.normal();
        const double o = rng.gamma(0.5 * nu, 0.5 * nu);
        return zeta +
               omega * (delta * v + std::sqrt(1.0 - delta * delta) * z) / std::sqrt(o);
    }
};

namespace detail {

/// Quantiles of the standard Skew-t(0, 1, lambda, nu) at several levels via
/// a tangent-substitution CDF grid (covers the whole real line, so no tail
/// truncation) refined by Newton steps on the exact density.
inline std::vector<double> std_skew_t_quantiles(double lambda, double nu,
                                                const std::vector<double>& taus) {
    constexpr int n_nodes = 4097;
    const double half_pi = 0.5 * math::pi;
    std::vector<double> theta(n_nodes), s(n_nodes), f(n_nodes), cdf(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        theta[i] = -half_pi + math::pi * i / (n_nodes - 1);
        if (i == 0 || i == n_nodes - 1) {
            s[i] = 0.0;
            f[i] = 0.0; // integrand vanishes at the endpoints
            continue;
        }
        s[i] = std::tan(theta[i]);
        const double sec2 = 1.0 + s[i] * s[i];
        f[i] = std::exp(skew_t_std_logpdf(s[i], lambda, nu)) * sec2;
    }
    cdf[0] = 0.0;
    const double dtheta = math::pi / (n_nodes - 1);
    for (int i = 1; i < n_nodes; ++i) {
        const double tm = 0.5 * (theta[i - 1] + theta[i]);
        const double sm = std::tan(tm);
        const double fm = std::exp(skew_t_std_logpdf(sm, lambda, nu)) * (1.0 + sm * sm);
        cdf[i] = cdf[i - 1] + dtheta / 6.0 * (f[i - 1] + 4.0 * fm + f[i]);
    }
    const double total = cdf[n_nodes - 1];

    std::vector<double> out(taus.size());
    for (std::size_t j = 0; j < taus.size(); ++j) {
        const double target = taus[j] * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        int i = std::clamp(static_cast<int>(it - cdf.begin()), 1, n_nodes - 2);
        const double frac = (target - cdf[i - 1]) / std::max(cdf[i] - cdf[i - 1], 1e-300);
        const double th = theta[i - 1] + frac * dtheta;
        double x = std::tan(std::clamp(th, -half_pi + 1e-9, half_pi - 1e-9));
        for (int k = 0; k < 3; ++k) {
            // one CDF evaluation by local trapezoid from the nearest node
            const double base_theta = theta[i - 1];
            const double base_cdf = cdf[i - 1];
            const double xt = std::atan(x);
            const int steps = 8;
            double acc = base_cdf;
            double prev_f = f[i - 1];
            for (int q = 1; q <= steps; ++q) {
                const double tq = base_theta + (xt - base_theta) * q / steps;
                const double sq = std::tan(tq);
                const double fq = std::exp(skew_t_std_logpdf(sq, lambda, nu)) * (1.0 + sq * sq);
                acc += 0.5 * (prev_f + fq) * (xt - base_theta) / steps;
                prev_f = fq;
            }
            const double err = acc - target;
            const double dens = std::exp(skew_t_std_logpdf(x, lambda, nu));
            if (dens <= 0.0) break;
            x -= err / dens;
        }
        out[j] = x;
    }
    return out;
}

} // namespace detail

struct SkewTInterpolation {
    SkewTDensity density;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

class InterpolationError : public std::runtime_error {
  public:
    InterpolationError(const std::string& what, SkewTInterpolation best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const SkewTInterpolation& best() const { return best_; }

  private:
    SkewTInterpolation best_;
};

/// Fits a free Skew-t to target quantiles by minimizing the sum of squared
/// quantile mismatches. A Nelder-Mead search runs over (lambda, nu') with nu
/// box-mapped to [2.1, 100]; the affine (zeta, omega) are profiled out in
/// closed form at every evaluation. Throws InterpolationError (carrying the
/// best point found) after 2000 objective evaluations without convergence.
inline SkewTInterpolation interpolate_skew_t(const std::map<double, double>& quantiles,
                                             int max_evals = 2000) {
    if (quantiles.size() < 4)
        throw std::invalid_argument("interpolate_skew_t: need at least 4 target quantiles");
    std::vector<double> taus, targets;
    for (const auto& [tau, q] : quantiles) {
        if (!(tau > 0.0 && tau < 1.0))
            throw std::invalid_argument("interpolate_skew_t: tau outside (0,1)");
        taus.push_back(tau);
        targets.push_back(q);
    }

    const double nu_lo = 2.1, nu_hi = 100.0;
    const auto to_nu = [&](double t) { return nu_lo + (nu_hi - nu_lo) / (1.0 + std::exp(-t)); };

    int evals = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    SkewTDensity best_density;
    const auto objective = [&](double lambda, double t_nu) {
        ++evals;
        const double nu = to_nu(t_nu);
        const auto qs = detail::std_skew_t_quantiles(lambda, nu, taus);
        // profile out (zeta, omega) by least squares, omega constrained > 0
        const double n = static_cast<double>(qs.size());
        double mq = 0.0, mt = 0.0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            mq += qs[i];
            mt += targets[i];
        }
        mq /= n;
        mt /= n;
        double sqq = 0.0, sqt = 0.0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            sqq += (qs[i] - mq) * (qs[i] - mq);
            sqt += (qs[i] - mq) * (targets[i] - mt);
        }
        double omega = sqq > 0.0 ? sqt / sqq : 1e-6;
        if (omega <= 1e-12) omega = 1e-12;
        const double zeta = mt - omega * mq;
        double obj = 0.0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const double e = targets[i] - zeta - omega * qs[i];
            obj += e * e;
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_density = {zeta, omega, lambda, nu};
        }
        return obj;
    };

    // moment-based start: asymmetry of the outer targets sets the lambda sign
    double lam0 = 0.0;
    {
        const double lo = targets.front(), hi = targets.back();
        const double mid = targets[targets.size() / 2];
        const double spread = std::max(hi - lo, 1e-8);
        lam0 = 4.0 * ((hi - mid) - (mid - lo)) / spread;
    }
    const double t0 = -2.43; // nu ~ 10

    // Nelder-Mead on (lambda, t_nu)
    struct Vertex {
        double x[2];
        double f;
    };
    std::vector<Vertex> simplex(3);
    simplex[0] = {{lam0, t0}, 0.0};
    simplex[1] = {{lam0 + 0.8, t0}, 0.0};
    simplex[2] = {{lam0, t0 + 1.0}, 0.0};
    for (auto& v : simplex) v.f = objective(v.x[0], v.x[1]);

    bool converged = false;
    while (evals < max_evals) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double spread = simplex[2].f - simplex[0].f;
        const double size = std::max(std::fabs(simplex[2].x[0] - simplex[0].x[0]),
                                     std::fabs(simplex[2].x[1] - simplex[0].x[1]));
        if (spread < 1e-12 || size < 1e-7) {
            converged = true;
            break;
        }
        double cx[2] = {0.5 * (simplex[0].x[0] + simplex[1].x[0]),
                        0.5 * (simplex[0].x[1] + simplex[1].x[1])};
        double rx[2] = {2.0 * cx[0] - simplex[2].x[0], 2.0 * cx[1] - simplex[2].x[1]};
        const double fr = objective(rx[0], rx[1]);
        if (fr < simplex[0].f) {
            double ex[2] = {cx[0] + 2.0 * (rx[0] - cx[0]), cx[1] + 2.0 * (rx[1] - cx[1])};
            const double fe = objective(ex[0], ex[1]);
            if (fe < fr) {
                simplex[2] = {{ex[0], ex[1]}, fe};
            } else {
                simplex[2] = {{rx[0], rx[1]}, fr};
            }
        } else if (fr < simplex[1].f) {
            simplex[2] = {{rx[0], rx[1]}, fr};
        } else {
            double kx[2] = {cx[0] + 0.5 * (simplex[2].x[0] - cx[0]),
                            cx[1] + 0.5 * (simplex[2].x[1] - cx[1])};
            const double fk = objective(kx[0], kx[1]);
            if (fk < simplex[2].f) {
                simplex[2] = {{kx[0], kx[1]}, fk};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i].x[0] = 0.5 * (simplex[i].x[0] + simplex[0].x[0]);
                    simplex[i].x[1] = 0.5 * (simplex[i].x[1] + simplex[0].x[1]);
                    simplex[i].f = objective(simplex[i].x[0], simplex[i].x[1]);
                }
            }
        }
    }

    SkewTInterpolation result{best_density, best_obj, evals, converged};
    if (!converged) {
        throw InterpolationError("interpolate_skew_t: no convergence within the evaluation budget",
                                 result);
    }
    return result;
}

} // namespace skewvol

#endif // SKEWVOL_ABG_QR_HPP
