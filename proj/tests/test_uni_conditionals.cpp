#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "skewvol/uni_sampler.hpp"
#include "support/oracles.hpp"

using namespace skewvol;

namespace {

// moments of TruncatedNormal_[0,inf)(m, s^2)
struct TnMoments {
    double mean, var;
};
TnMoments tn_moments(double m, double s) {
    const double a = -m / s;
    const double Z = 0.5 * std::erfc(a * 0.7071067811865476);
    const double r = math::norm_pdf(a) / Z;
    return {m + s * r, s * s * (1.0 + a * r - r * r)};
}

} // namespace

TEST_CASE("mixing v: delta = 0 reduces to the half normal") {
    Rng rng(1);
    const int T = 1000000;
    LatentPaths paths = LatentPaths::constant(T, 1.0);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(T);
    Eigen::MatrixXd X(T, 0);
    draw_mixing_v(y, X, ShockSpec::skew_normal(), Eigen::VectorXd(0), paths, rng);
    std::vector<double> v(paths.v.data(), paths.v.data() + T);
    REQUIRE(oracles::mean(v) ==
            Catch::Approx(math::sqrt_two_over_pi).margin(3.0 * oracles::se_mean(v)));
}

TEST_CASE("mixing v: zero raw residual gives mean -delta zeta / omega") {
    Rng rng(2);
    const int T = 400000;
    const double lambda = 1.0;
    LatentPaths paths = LatentPaths::constant(T, 1.0);
    paths.lambda.setConstant(lambda);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(T); // y - x pi = 0
    Eigen::MatrixXd X(T, 0);
    draw_mixing_v(y, X, ShockSpec::skew_normal(), Eigen::VectorXd(0), paths, rng);

    const auto sp = shock_params(ShockSpec::skew_normal(), lambda);
    const auto mom = tn_moments(-sp.delta * sp.zeta / sp.omega,
                                std::sqrt(1.0 - sp.delta * sp.delta));
    std::vector<double> v(paths.v.data(), paths.v.data() + T);
    REQUIRE(oracles::mean(v) == Catch::Approx(mom.mean).margin(4.0 * oracles::se_mean(v)));
    REQUIRE(oracles::variance(v) == Catch::Approx(mom.var).epsilon(0.01));
}

TEST_CASE("mixing v: delta = 0.8 variance matches the truncated-normal oracle") {
    Rng rng(3);
    const int T = 400000;
    const double delta = 0.8;
    const double lambda = delta / std::sqrt(1.0 - delta * delta);
    LatentPaths paths = LatentPaths::constant(T, 1.0);
    paths.lambda.setConstant(lambda);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(T);
    Eigen::MatrixXd X(T, 0);
    draw_mixing_v(y, X, ShockSpec::skew_normal(), Eigen::VectorXd(0), paths, rng);

    const auto sp = shock_params(ShockSpec::skew_normal(), lambda);
    REQUIRE(sp.delta == Catch::Approx(0.8).margin(1e-12));
    const auto mom = tn_moments(-sp.delta * sp.zeta / sp.omega, std::sqrt(1.0 - 0.64));
    std::vector<double> v(paths.v.data(), paths.v.data() + T);
    REQUIRE(oracles::variance(v) == Catch::Approx(mom.var).epsilon(0.01));
}

TEST_CASE("mixing o: v = 0 accepts every proposal") {
    Rng rng(4);
    const int T = 3000;
    LatentPaths paths = LatentPaths::constant(T, 1.0);
    paths.lambda.setConstant(2.0);
    paths.v.setZero();
    Eigen::VectorXd y = Eigen::VectorXd::Constant(T, 0.3);
    Eigen::MatrixXd X(T, 0);
    const Eigen::VectorXd before = paths.o;
    draw_mixing_o(y, X, ShockSpec::skew_t(5.0), Eigen::VectorXd(0), paths, rng);
    for (int t = 0; t < T; ++t) REQUIRE(paths.o[t] != before[t]);
}

TEST_CASE("mixing o: lambda = 0 kernel matches the exact Student-t mixture posterior") {
    // with delta = 0 the MH correction vanishes and the draw is exact
    // Gamma((nu+1)/2, (nu + z^2)/2); nu = 5 gives integer shape 3 so the CDF
    // has the closed form 1 - exp(-rx)(1 + rx + (rx)^2/2)
    Rng rng(5);
    const double nu = 5.0, yval = 0.9;
    const auto spec = ShockSpec::skew_t(nu);
    const auto sp = shock_params(spec, 0.0);
    const double rate = 0.5 * (nu + yval * yval / (sp.omega * sp.omega));

    const int n = 100000;
    LatentPaths paths = LatentPaths::constant(1, 1.0);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, yval);
    Eigen::MatrixXd X(1, 0);
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
        draw_mixing_o(y, X, spec, Eigen::VectorXd(0), paths, rng);
        draws[i] = paths.o[0];
    }
    const double d = oracles::ks_statistic(draws, [&](double x) {
        const double rx = rate * x;
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rx) * (1.0 + rx + 0.5 * rx * rx);
    });
    REQUIRE(d < oracles::ks_critical_1pct(n));
}

TEST_CASE("pi draw: single-observation conjugate update") {
    // x = 1, ytilde = 2, sigma^2 = 1, prior N(0,1)  =>  posterior N(1, 0.5)
    Rng rng(6);
    LatentPaths paths = LatentPaths::constant(1, 1.0);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 2.0);
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(1, 1);
    std::vector<double> draws(40000);
    for (auto& d : draws) {
        d = draw_pi(y, X, ShockSpec::skew_normal(), paths, Eigen::VectorXd::Zero(1),
                    Eigen::MatrixXd::Identity(1, 1), rng)[0];
    }
    REQUIRE(oracles::mean(draws) == Catch::Approx(1.0).margin(3.0 * oracles::se_mean(draws)));
    REQUIRE(oracles::variance(draws) ==
            Catch::Approx(0.5).margin(3.0 * oracles::se_variance(draws)));
}

TEST_CASE("pi draw: matches the textbook regression posterior when lambda = 0, h = 1") {
    Rng rng(7);
    const int T = 200, p = 2;
    Eigen::MatrixXd X(T, p);
    Eigen::VectorXd y(T);
    for (int t = 0; t < T; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = rng.normal();
        y[t] = 0.5 + 1.5 * X(t, 1) + rng.normal();
    }
    LatentPaths paths = LatentPaths::constant(T, 1.0);
    paths.v.setZero(); // delta = 0 removes the v term anyway
    const Eigen::VectorXd prior_mean = Eigen::VectorXd::Zero(p);
    const Eigen::MatrixXd prior_cov = 4.0 * Eigen::MatrixXd::Identity(p, p);

    // closed-form conjugate posterior with unit noise
    const Eigen::MatrixXd post_prec = prior_cov.inverse() + X.transpose() * X;
    const Eigen::VectorXd post_mean = post_prec.ldlt().solve(X.transpose() * y);

    const int n = 30000;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
    std::vector<double> first(n);
    for (int i = 0; i < n; ++i) {
        const auto d = draw_pi(y, X, ShockSpec::skew_normal(), paths, prior_mean, prior_cov, rng);
        acc += d;
        first[i] = d[0];
    }
    acc /= n;
    const Eigen::MatrixXd post_cov = post_prec.inverse();
    for (int j = 0; j < p; ++j) {
        REQUIRE(acc[j] == Catch::Approx(post_mean[j])
                              .margin(4.0 * std::sqrt(post_cov(j, j) / n)));
    }
    REQUIRE(oracles::variance(first) == Catch::Approx(post_cov(0, 0)).epsilon(0.05));
}

TEST_CASE("pi draw: dominating prior returns the prior mean") {
    Rng rng(8);
    LatentPaths paths = LatentPaths::constant(5, 1.0);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 3.0);
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(5, 1);
    const auto d = draw_pi(y, X, ShockSpec::skew_normal(), paths,
                           Eigen::VectorXd::Constant(1, -2.0),
                           Eigen::MatrixXd::Identity(1, 1) * 1e-14, rng);
    REQUIRE(d[0] == Catch::Approx(-2.0).margin(1e-4));
}

TEST_CASE("state coefficient draw: prior returned for an empty sample") {
    Rng rng(9);
    StateEqSpec eq;
    std::vector<double> empty;
    std::vector<double> draws(20000);
    for (auto& d : draws) {
        d = draw_state_coefs(0.0, empty, eq, 0.04, Eigen::VectorXd::Constant(1, 1.0),
                             Eigen::MatrixXd::Identity(1, 1) * 0.01, rng)[0];
    }
    REQUIRE(oracles::mean(draws) == Catch::Approx(1.0).margin(3.0 * oracles::se_mean(draws)));
    REQUIRE(oracles::variance(draws) ==
            Catch::Approx(0.01).margin(3.0 * oracles::se_variance(draws)));
}

TEST_CASE("state coefficient draw: consistency on a long simulated path") {
    Rng rng(10);
    StateEqSpec eq;
    const double phi = 0.9, sd = 0.2;
    const int T = 10000;
    std::vector<double> path(T);
    double s = 0.0;
    for (int t = 0; t < T; ++t) {
        s = phi * s + sd * rng.normal();
        path[t] = s;
    }
    double acc = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        acc += draw_state_coefs(0.0, path, eq, sd * sd, Eigen::VectorXd::Zero(1),
                                Eigen::MatrixXd::Identity(1, 1) * 100.0, rng)[0];
    }
    REQUIRE(acc / n == Catch::Approx(phi).margin(0.02));
}

TEST_CASE("state coefficient draw: flat likelihood returns prior moments") {
    Rng rng(11);
    StateEqSpec eq;
    std::vector<double> path(50, 0.3);
    std::vector<double> draws(20000);
    for (auto& d : draws) {
        d = draw_state_coefs(0.3, path, eq, 1e12, Eigen::VectorXd::Constant(1, 1.0),
                             Eigen::MatrixXd::Identity(1, 1) * 0.01, rng)[0];
    }
    REQUIRE(oracles::mean(draws) == Catch::Approx(1.0).margin(3.0 * oracles::se_mean(draws)));
    REQUIRE(oracles::variance(draws) ==
            Catch::Approx(0.01).margin(3.0 * oracles::se_variance(draws)));
}

TEST_CASE("state coefficient draw: stationarity enforcement caps |phi|") {
    Rng rng(12);
    StateEqSpec eq;
    // strongly explosive evidence: path with s_t = 1.2 s_{t-1} exactly
    std::vector<double> path(60);
    double s = 1.0;
    for (auto& x : path) {
        s *= 1.2;
        x = s;
    }
    Eigen::VectorXd prev = Eigen::VectorXd::Constant(1, 0.7);
    const auto d = draw_state_coefs(1.0, path, eq, 1e-12, Eigen::VectorXd::Constant(1, 1.0),
                                    Eigen::MatrixXd::Identity(1, 1) * 0.01, rng, true, &prev);
    REQUIRE(d[0] == Catch::Approx(0.7).margin(1e-12)); // kept the previous value
}

TEST_CASE("sigma2 draw: zero residuals keep the prior scale") {
    Rng rng(13);
    StateEqSpec eq;
    // phi = 1 and a constant path makes every residual zero
    std::vector<double> path(10, 0.7);
    std::vector<double> draws(100000);
    for (auto& d : draws) {
        d = draw_sigma2(0.7, path, eq, Eigen::VectorXd::Constant(1, 1.0), 5.0, 0.16, rng);
        REQUIRE(d > 0.0);
    }
    // posterior IG(10, 0.16): mean 0.16/9, variance 0.16^2/(81*8)
    REQUIRE(oracles::mean(draws) ==
            Catch::Approx(0.16 / 9.0).margin(3.0 * oracles::se_mean(draws)));
    REQUIRE(oracles::variance(draws) ==
            Catch::Approx(0.16 * 0.16 / (81.0 * 8.0)).epsilon(0.05));
}

TEST_CASE("sigma2 draw: hand-computed update with SSR = 2") {
    Rng rng(14);
    StateEqSpec eq;
    // phi = 0 so residuals are the path values; choose them to sum-square to 2
    std::vector<double> path(10, std::sqrt(0.2));
    std::vector<double> draws(100000);
    for (auto& d : draws) {
        d = draw_sigma2(0.0, path, eq, Eigen::VectorXd::Zero(1), 5.0, 0.16, rng);
    }
    // posterior IG(10, 1.16): mean 1.16/9
    REQUIRE(oracles::mean(draws) ==
            Catch::Approx(1.16 / 9.0).margin(3.0 * oracles::se_mean(draws)));
}

TEST_CASE("initial state draw: equal precision averages prior mean and first state") {
    Rng rng(15);
    const double mu0 = 0.4, s1 = 1.2;
    std::vector<double> draws(40000);
    for (auto& d : draws) d = draw_initial_state(s1, 0.0, 1.0, 0.09, mu0, 0.09, rng);
    REQUIRE(oracles::mean(draws) ==
            Catch::Approx(0.5 * (mu0 + s1)).margin(3.0 * oracles::se_mean(draws)));
}

TEST_CASE("initial state draw: degenerate prior pins the draw") {
    Rng rng(16);
    const double d = draw_initial_state(5.0, 0.0, 0.9, 0.05, -1.0, 1e-14, rng);
    REQUIRE(d == Catch::Approx(-1.0).margin(1e-5));
}

TEST_CASE("initial state draw: consistent signal leaves the prior mean") {
    Rng rng(17);
    const double mu0 = 0.8, phi = 0.9;
    std::vector<double> draws(40000);
    for (auto& d : draws) d = draw_initial_state(phi * mu0, 0.0, phi, 0.04, mu0, 0.25, rng);
    REQUIRE(oracles::mean(draws) == Catch::Approx(mu0).margin(3.0 * oracles::se_mean(draws)));
}

TEST_CASE("initial state draw: phi = 0 falls back to the prior") {
    Rng rng(18);
    std::vector<double> draws(40000);
    for (auto& d : draws) d = draw_initial_state(100.0, 0.0, 0.0, 0.01, 0.3, 0.49, rng);
    REQUIRE(oracles::mean(draws) == Catch::Approx(0.3).margin(3.0 * oracles::se_mean(draws)));
    REQUIRE(oracles::variance(draws) ==
            Catch::Approx(0.49).margin(3.0 * oracles::se_variance(draws)));
}

TEST_CASE("initial state draw: exogenous shift is subtracted from the signal") {
    Rng rng(19);
    // s1 = phi mu0 + shift: after removing the shift the signal agrees with the prior
    const double mu0 = 0.5, phi = 0.8, shift = 2.0;
    std::vector<double> draws(40000);
    for (auto& d : draws) {
        d = draw_initial_state(phi * mu0 + shift, shift, phi, 0.04, mu0, 0.25, rng);
    }
    REQUIRE(oracles::mean(draws) == Catch::Approx(mu0).margin(3.0 * oracles::se_mean(draws)));
}
