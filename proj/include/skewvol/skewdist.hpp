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

#ifndef SKEWVOL_SKEWDIST_HPP
#define SKEWVOL_SKEWDIST_HPP

#include <cmath>
#include <stdexcept>

#include "skewvol/math/special.hpp"
#include "skewvol/rng.hpp"

namespace skewvol {

enum class ShockFamily { SkewNormal, SkewT };

/// Shape parameter lambda together with its one-to-one map
/// delta = lambda / sqrt(1 + lambda^2), delta in (-1, 1).
struct ShapeValue {
    double lambda = 0.0;
    double delta = 0.0;
};

/// delta(lambda) = lambda / sqrt(1 + lambda^2). Odd, strictly increasing,
/// clamped to +-(1 - 1e-12) so downstream scale formulas stay finite as
/// |lambda| -> inf.
inline double delta_of_lambda(double lambda) {
    if (!std::isfinite(lambda)) throw std::domain_error("delta_of_lambda: non-finite shape");
    const double d = lambda / std::sqrt(1.0 + lambda * lambda);
    const double cap = 1.0 - 1e-12;
    if (d > cap) return cap;
    if (d < -cap) return -cap;
    return d;
}

inline ShapeValue make_shape(double lambda) { return {lambda, delta_of_lambda(lambda)}; }

/// Skew-Normal(zeta, omega^2, lambda) with location and scale tied down so
/// the distribution has mean 0 and variance 1:
///   zeta  = -omega * delta * sqrt(2/pi)
///   omega^2 = (1 - (2/pi) delta^2)^{-1}
struct ConstrainedSkewNormal {
    double zeta;
    double omega2;
    double omega;
    ShapeValue shape;
};

inline ConstrainedSkewNormal constrain_skew_normal(const ShapeValue& shape) {
    const double d2 = shape.delta * shape.delta;
    const double omega2 = 1.0 / (1.0 - math::two_over_pi * d2);
    const double omega = std::sqrt(omega2);
    const double zeta = -omega * shape.delta * math::sqrt_two_over_pi;
    return {zeta, omega2, omega, shape};
}

/// Skew-t(zeta, omega^2, lambda, nu) under the same zero-mean/unit-variance
/// constraints, with
///   k1 = sqrt(nu/2) Gamma((nu-1)/2) / Gamma(nu/2),  k2 = nu / (nu - 2)
///   zeta  = -omega * delta * k1 * sqrt(2/pi)
///   omega^2 = (k2 - (2/pi) k1^2 delta^2)^{-1}
struct ConstrainedSkewT {
    double zeta;
    double omega2;
    double omega;
    ShapeValue shape;
    double nu;
    double k1;
    double k2;
};

inline double skew_t_k1(double nu) {
    return std::sqrt(0.5 * nu) *
           std::exp(math::lgamma_lanczos(0.5 * (nu - 1.0)) - math::lgamma_lanczos(0.5 * nu));
}

inline ConstrainedSkewT constrain_skew_t(const ShapeValue& shape, double nu) {
    if (!(nu > 2.0)) throw std::domain_error("constrain_skew_t: variance undefined for nu <= 2");
    const double k1 = skew_t_k1(nu);
    const double k2 = nu / (nu - 2.0);
    const double d2 = shape.delta * shape.delta;
    const double denom = k2 - math::two_over_pi * k1 * k1 * d2;
    if (!(denom > 0.0)) throw std::domain_error("constrain_skew_t: nonpositive scale denominator");
    const double omega2 = 1.0 / denom;
    const double omega = std::sqrt(omega2);
    const double zeta = -omega * shape.delta * k1 * math::sqrt_two_over_pi;
    return {zeta, omega2, omega, shape, nu, k1, k2};
}

/// log density of the standard Skew-Normal(0, 1, lambda):
///   2 phi(x) Phi(lambda x)
inline double skew_normal_std_logpdf(double x, double lambda) {
    return math::log_two + math::norm_logpdf(x) + math::norm_logcdf(lambda * x);
}

/// log density of the standard Skew-t(0, 1, lambda, nu):
///   2 t_nu(x) T_{nu+1}( lambda x sqrt((nu+1)/(nu+x^2)) )
inline double skew_t_std_logpdf(double x, double lambda, double nu) {
    const double w = lambda * x * std::sqrt((nu + 1.0) / (nu + x * x));
    const double cdf = math::student_t_cdf(w, nu + 1.0);
    const double logcdf = cdf > 1e-300 ? std::log(cdf)
                                       : math::student_t_logpdf(w, nu + 1.0) - std::log(-w);
    return math::log_two + math::student_t_logpdf(x, nu) + logcdf;
}

inline double logpdf(const ConstrainedSkewNormal& d, double x) {
    const double z = (x - d.zeta) / d.omega;
    return skew_normal_std_logpdf(z, d.shape.lambda) - std::log(d.omega);
}

inline double logpdf(const ConstrainedSkewT& d, double x) {
    const double z = (x - d.zeta) / d.omega;
    return skew_t_std_logpdf(z, d.shape.lambda, d.nu) - std::log(d.omega);
}

inline double pdf(const ConstrainedSkewNormal& d, double x) { return std::exp(logpdf(d, x)); }
inline double pdf(const ConstrainedSkewT& d, double x) { return std::exp(logpdf(d, x)); }

/// One draw decomposed into its mixing variables:
///   x = zeta + delta*omega*o^{-1/2}*v + sqrt(1-delta^2)*omega*o^{-1/2}*z
/// with v ~ TruncatedNormal_[0,inf)(0,1), z ~ N(0,1), o ~ Gamma(nu/2, nu/2)
/// (o identically 1 under the Skew-Normal).
struct MixingDraw {
    double v;
    double o;
    double z;
    double x;
};

inline MixingDraw sample_mixing(const ConstrainedSkewNormal& d, Rng& rng) {
    const double v = rng.truncated_normal_lb0(0.0, 1.0);
    const double z = rng.normal();
    const double delta = d.shape.delta;
    const double x = d.zeta + delta * d.omega * v + std::sqrt(1.0 - delta * delta) * d.omega * z;
    return {v, 1.0, z, x};
}

inline MixingDraw sample_mixing(const ConstrainedSkewT& d, Rng& rng) {
    const double v = rng.truncated_normal_lb0(0.0, 1.0);
    const double z = rng.normal();
    const double o = rng.gamma(0.5 * d.nu, 0.5 * d.nu);
    const double delta = d.shape.delta;
    const double s = d.omega / std::sqrt(o);
    const double x = d.zeta + delta * s * v + std::sqrt(1.0 - delta * delta) * s * z;
    return {v, o, z, x};
}

inline double sample(const ConstrainedSkewNormal& d, Rng& rng) { return sample_mixing(d, rng).x; }
inline double sample(const ConstrainedSkewT& d, Rng& rng) { return sample_mixing(d, rng).x; }

/// Family tag plus the constants that depend only on nu; the per-period
/// constrained parameters follow from lambda_t alone.
struct ShockSpec {
    ShockFamily family = ShockFamily::SkewNormal;
    double nu = 5.0;

    static ShockSpec skew_normal() { return {ShockFamily::SkewNormal, 0.0}; }
    static ShockSpec skew_t(double nu) {
        if (!(nu > 2.0)) throw std::domain_error("ShockSpec: nu must exceed 2");
        return {ShockFamily::SkewT, nu};
    }

    bool is_skew_t() const { return family == ShockFamily::SkewT; }

    /// k1 for the Skew-t family (1 for the Skew-Normal, so shared formulas
    /// can be written once).
    double k1() const { return is_skew_t() ? skew_t_k1(nu) : 1.0; }
    double k2() const { return is_skew_t() ? nu / (nu - 2.0) : 1.0; }
};

/// Constrained (zeta, omega, delta) at a given lambda, the quantities the
/// sampler needs in its inner loops.
struct ShockParams {
    double delta;
    double omega;
    double zeta;
};

inline ShockParams shock_params(const ShockSpec& spec, double lambda) {
    const double delta = delta_of_lambda(lambda);
    const double d2 = delta * delta;
    if (spec.is_skew_t()) {
        const double k1 = spec.k1();
        const double omega =
            std::sqrt(1.0 / (spec.k2() - math::two_over_pi * k1 * k1 * d2));
        return {delta, omega, -omega * delta * k1 * math::sqrt_two_over_pi};
    }
    const double omega = std::sqrt(1.0 / (1.0 - math::two_over_pi * d2));
    return {delta, omega, -omega * delta * math::sqrt_two_over_pi};
}

/// log density of the constrained shock at eps given lambda.
inline double shock_logpdf(const ShockSpec& spec, double lambda, double eps) {
    if (spec.is_skew_t()) return logpdf(constrain_skew_t(make_shape(lambda), spec.nu), eps);
    return logpdf(constrain_skew_normal(make_shape(lambda)), eps);
}

inline MixingDraw shock_sample_mixing(const ShockSpec& spec, double lambda, Rng& rng) {
    if (spec.is_skew_t()) return sample_mixing(constrain_skew_t(make_shape(lambda), spec.nu), rng);
    return sample_mixing(constrain_skew_normal(make_shape(lambda)), rng);
}

} // namespace skewvol

#endif // SKEWVOL_SKEWDIST_HPP
