#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "skewvol/math/special.hpp"
#include "support/oracles.hpp"

using namespace skewvol::math;

TEST_CASE("lgamma matches the standard library to 1e-13 relative") {
    for (double x : {0.1, 0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.5, 50.0, 171.0, 500.0}) {
        const double ref = std::lgamma(x);
        const double got = lgamma_lanczos(x);
        REQUIRE(std::fabs(got - ref) <= 1e-13 * std::max(1.0, std::fabs(ref)));
    }
    REQUIRE_THROWS_AS(lgamma_lanczos(0.0), std::domain_error);
    REQUIRE_THROWS_AS(lgamma_lanczos(-1.0), std::domain_error);
}

TEST_CASE("normal cdf and quantile") {
    REQUIRE(norm_cdf(0.0) == Catch::Approx(0.5).margin(1e-16));
    REQUIRE(norm_cdf(1.959963984540054) == Catch::Approx(0.975).margin(1e-12));
    REQUIRE(norm_quantile(0.975) == Catch::Approx(1.959963984540054).margin(1e-12));
    REQUIRE(norm_quantile(0.5) == Catch::Approx(0.0).margin(1e-14));

    // round trip over a wide range; the far upper tail is excluded because
    // p = Phi(x) saturates toward 1 in double precision there
    for (double x : {-37.0, -10.0, -5.0, -1.3, 0.0, 0.7, 3.0, 5.0}) {
        const double p = norm_cdf(x);
        if (p > 0.0 && p < 1.0) {
            REQUIRE(norm_quantile(p) == Catch::Approx(x).margin(1e-9));
        }
    }
    // log cdf agrees with log(cdf) where both are representable
    for (double x : {-9.0, -5.0, -1.0, 0.0, 2.0}) {
        REQUIRE(norm_logcdf(x) == Catch::Approx(std::log(norm_cdf(x))).epsilon(1e-10));
    }
    // deep tail stays finite and monotone
    REQUIRE(std::isfinite(norm_logcdf(-80.0)));
    REQUIRE(norm_logcdf(-80.0) < norm_logcdf(-60.0));
}

TEST_CASE("regularized incomplete beta") {
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double a : {0.5, 2.0, 7.5}) {
        for (double b : {0.5, 1.5, 4.0}) {
            for (double x : {0.05, 0.3, 0.71, 0.97}) {
                REQUIRE(ibeta(a, b, x) ==
                        Catch::Approx(1.0 - ibeta(b, a, 1.0 - x)).margin(1e-13));
            }
        }
    }
    // against direct quadrature of the beta density
    const double a = 2.5, b = 1.5, x = 0.42;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double byquad = oracles::simpson(
        [&](double t) {
            if (t <= 0.0 || t >= 1.0) return 0.0;
            return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - lbeta);
        },
        0.0, x, 20000);
    REQUIRE(ibeta(a, b, x) == Catch::Approx(byquad).margin(1e-9));
}

TEST_CASE("student-t cdf and quantile") {
    REQUIRE(student_t_cdf(0.0, 5.0) == Catch::Approx(0.5).margin(1e-15));
    // nu = 1 is the Cauchy: F(x) = 1/2 + atan(x)/pi
    for (double x : {-3.0, -0.5, 0.2, 4.0}) {
        REQUIRE(student_t_cdf(x, 1.0) ==
                Catch::Approx(0.5 + std::atan(x) / pi).margin(1e-12));
    }
    // cdf agrees with quadrature of the density for nu = 5
    const double nu = 5.0;
    for (double x : {-4.0, -1.0, 0.3, 2.2}) {
        const double byquad =
            0.5 + oracles::simpson([&](double t) { return std::exp(student_t_logpdf(t, nu)); },
                                   0.0, x, 20000);
        REQUIRE(student_t_cdf(x, nu) == Catch::Approx(byquad).margin(1e-10));
    }
    // quantile round trip
    for (double p : {0.01, 0.05, 0.3, 0.5, 0.9, 0.99}) {
        REQUIRE(student_t_cdf(student_t_quantile(p, nu), nu) == Catch::Approx(p).margin(1e-10));
    }
}
