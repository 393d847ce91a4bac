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

#ifndef SKEWVOL_PGAS_HPP
#define SKEWVOL_PGAS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewvol/rng.hpp"

namespace skewvol {

/// Thrown when every particle weight vanishes at some time step. Callers
/// should retry with a larger particle count.
class ParticleCollapse : public std::runtime_error {
  public:
    explicit ParticleCollapse(int t)
        : std::runtime_error("particle collapse at t = " + std::to_string(t)), t_(t) {}
    int time_index() const { return t_; }

  private:
    int t_;
};

/// Specification of one conditional-SMC path update for a scalar state.
///
/// * init_sampler(rng) draws s_1 from the transition-based proposal g(s_1).
/// * transition(prev, t, rng) propagates a particle into period t (2-based).
/// * log_transition_density(cur, prev, t) evaluates log f(s_t = cur | s_{t-1} = prev).
/// * obs_loglik(s, t) is the log observation weight log W_t(s).
///
/// The previous Gibbs draw (reference_path) is pinned as particle K at every
/// step; its ancestor is refreshed by ancestor sampling.
template <class Init, class Transition, class TransLogDensity, class ObsLoglik>
struct ParticleStepSpec {
    int num_particles;
    std::span<const double> reference_path;
    Init init_sampler;
    Transition transition;
    TransLogDensity log_transition_density;
    ObsLoglik obs_loglik;
};

template <class Init, class Transition, class TransLogDensity, class ObsLoglik>
ParticleStepSpec<Init, Transition, TransLogDensity, ObsLoglik>
make_particle_step(int num_particles, std::span<const double> reference_path, Init init,
                   Transition transition, TransLogDensity trans_logpdf, ObsLoglik obs_loglik) {
    return {num_particles, reference_path, init, transition, trans_logpdf, obs_loglik};
}

namespace detail {

/// Normalize log weights in place into probabilities; returns false when all
/// weights are zero.
inline bool normalize_log_weights(std::vector<double>& w) {
    double wmax = -std::numeric_limits<double>::infinity();
    for (double x : w) wmax = std::max(wmax, x);
    if (!std::isfinite(wmax)) return false;
    double sum = 0.0;
    for (double& x : w) {
        x = std::exp(x - wmax);
        sum += x;
    }
    for (double& x : w) x /= sum;
    return true;
}

/// Sample from a discrete distribution given its cumulative weights.
inline int sample_cumulative(const std::vector<double>& cum, Rng& rng) {
    const double u = rng.uniform() * cum.back();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const int idx = static_cast<int>(it - cum.begin());
    return std::min(idx, static_cast<int>(cum.size()) - 1);
}

} // namespace detail

/// One conditional-SMC sweep with ancestor sampling. Returns a freshly drawn
/// path of the same length as the reference. K-1 particles are propagated
/// from the transition proposal, the reference path is pinned as particle K,
/// weights equal the observation likelihood, resampling is multinomial at
/// every step, and the reference particle's ancestor is redrawn with
/// probability proportional to w_{t-1}^k f(s_t^ref | s_{t-1}^k).
template <class Init, class Transition, class TransLogDensity, class ObsLoglik>
std::vector<double>
csmc_ancestor_sampling(const ParticleStepSpec<Init, Transition, TransLogDensity, ObsLoglik>& spec,
                       Rng& rng) {
    const int K = spec.num_particles;
    const int T = static_cast<int>(spec.reference_path.size());
    if (K < 2) throw std::invalid_argument("csmc_ancestor_sampling: need at least 2 particles");
    if (T == 0) return {};

    Eigen::MatrixXd states(K, T);
    Eigen::MatrixXi ancestors(K, T); // ancestors(k, t) = index at t-1 of particle k's parent

    std::vector<double> logw(K), w(K), cum(K), asw(K);

    for (int k = 0; k < K - 1; ++k) states(k, 0) = spec.init_sampler(rng);
    states(K - 1, 0) = spec.reference_path[0];
    for (int k = 0; k < K; ++k) logw[k] = spec.obs_loglik(states(k, 0), 1);
    w = logw;
    if (!detail::normalize_log_weights(w)) throw ParticleCollapse(1);

    for (int t = 1; t < T; ++t) {
        cum[0] = w[0];
        for (int k = 1; k < K; ++k) cum[k] = cum[k - 1] + w[k];

        for (int k = 0; k < K - 1; ++k) {
            const int a = detail::sample_cumulative(cum, rng);
            ancestors(k, t) = a;
            states(k, t) = spec.transition(states(a, t - 1), t + 1, rng);
        }
        states(K - 1, t) = spec.reference_path[t];

        // ancestor sampling for the pinned particle
        double amax = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
            asw[k] = std::log(w[k]) +
                     spec.log_transition_density(states(K - 1, t), states(k, t - 1), t + 1);
            amax = std::max(amax, asw[k]);
        }
        if (!std::isfinite(amax)) throw ParticleCollapse(t + 1);
        double asum = 0.0;
        for (int k = 0; k < K; ++k) {
            asw[k] = std::exp(asw[k] - amax);
            asum += asw[k];
        }
        const double u = rng.uniform() * asum;
        double acc = 0.0;
        int aref = K - 1;
        for (int k = 0; k < K; ++k) {
            acc += asw[k];
            if (u < acc) {
                aref = k;
                break;
            }
        }
        ancestors(K - 1, t) = aref;

        for (int k = 0; k < K; ++k) logw[k] = spec.obs_loglik(states(k, t), t + 1);
        w = logw;
        if (!detail::normalize_log_weights(w)) throw ParticleCollapse(t + 1);
    }

    // select a path with probability proportional to the final weights
    cum[0] = w[0];
    for (int k = 1; k < K; ++k) cum[k] = cum[k - 1] + w[k];
    int j = detail::sample_cumulative(cum, rng);

    std::vector<double> path(T);
    for (int t = T - 1; t >= 0; --t) {
        path[t] = states(j, t);
        if (t > 0) j = ancestors(j, t);
    }
    return path;
}

/// Single-site independence-MH sweep over an AR(1)-driven path.
///
/// At interior t the proposal is N(mu_t, sigma2/(phi^2+1)) with
///   mu_t = [phi (s_{t-1} + s_{t+1}) + c_t - phi c_{t+1}] / (phi^2 + 1)
/// (c_t the exogenous shift entering the transition into t), which is the
/// product of the two adjacent transitions; at t = T the proposal is the
/// one-sided conditional N(phi s_{T-1} + c_T, sigma2). The proposal cancels
/// the transition terms of the target, so the acceptance ratio reduces to
/// the observation-likelihood ratio.
///
/// obs_loglik(s, t) must be the same observation weight used by the particle
/// step (for the volatility path the state is log h_t and the weight carries
/// the h^{-1/2} normalization, matching the printed acceptance ratios).
template <class ObsLoglik, class ExoShift>
int mh_path_sweep(std::span<double> path, double initial_state, double phi, double sigma2,
                  ExoShift exo_shift, ObsLoglik obs_loglik, Rng& rng) {
    const int T = static_cast<int>(path.size());
    int accepted = 0;
    const double interior_sd = std::sqrt(sigma2 / (phi * phi + 1.0));
    const double boundary_sd = std::sqrt(sigma2);
    for (int t = 1; t <= T; ++t) {
        const double prev = (t == 1) ? initial_state : path[t - 2];
        double mean, sd;
        if (t < T) {
            mean = (phi * (prev + path[t]) + exo_shift(t) - phi * exo_shift(t + 1)) /
                   (phi * phi + 1.0);
            sd = interior_sd;
        } else {
            mean = phi * prev + exo_shift(t);
            sd = boundary_sd;
        }
        const double proposal = rng.normal(mean, sd);
        const double log_ratio = obs_loglik(proposal, t) - obs_loglik(path[t - 1], t);
        if (log_ratio >= 0.0 || std::log(rng.uniform_pos()) < log_ratio) {
            path[t - 1] = proposal;
            ++accepted;
        }
    }
    return accepted;
}

} // namespace skewvol

#endif // SKEWVOL_PGAS_HPP
