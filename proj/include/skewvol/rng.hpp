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

#ifndef SKEWVOL_RNG_HPP
#define SKEWVOL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "skewvol/math/special.hpp"

namespace skewvol {

/// Seeded random stream with the variate generators the samplers need.
/// All generators are implemented on top of the raw uniform stream so that
/// output is bit-reproducible for a fixed seed, independent of the standard
/// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1], for safe use under log().
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal (Marsaglia polar, cached spare deviate).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential() { return -std::log(uniform_pos()); }

    /// Gamma(shape, rate) by Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return d * v / rate;
            }
        }
    }

    /// InverseGamma(shape, scale), density proportional to x^{-(shape+1)} exp(-scale/x).
    double inverse_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

    /// Normal(mean, sd^2) truncated to [0, inf), drawn by inverse CDF.
    /// Exact for the half-normal case mean = 0. When the admissible tail mass
    /// underflows entirely, falls back to an exponential rejection step.
    double truncated_normal_lb0(double mean, double sd) {
        const double a = -mean / sd; // standardized lower bound
        const double tail = 0.5 * std::erfc(a * 0.70710678118654752440); // P(Z > a)
        const double u = uniform_pos();
        if (tail > 1e-290) {
            const double z = -math::norm_quantile(tail * u);
            return mean + sd * z;
        }
        // extreme bound: Robert's translated-exponential rejection in z >= a
        const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
        for (;;) {
            const double z = a + exponential() / alpha;
            const double rho = std::exp(-0.5 * (z - alpha) * (z - alpha));
            if (uniform() <= rho) return mean + sd * z;
        }
    }

    /// Draw an index in [0, n) with probability proportional to weights[i].
    /// Weights must be non-negative with a positive sum.
    template <class Vec>
    int categorical(const Vec& weights, int n, double total) {
        const double u = uniform() * total;
        double acc = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

    std::uint64_t raw() { return engine_(); }

    /// Derive an independent stream seed, e.g. per chain or per origin.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
        // splitmix64 finalizer over the combined value
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace skewvol

#endif // SKEWVOL_RNG_HPP
