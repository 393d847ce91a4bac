#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <vector>

#include "skewvol/rng.hpp"
#include "skewvol/states.hpp"
#include "support/oracles.hpp"

using namespace skewvol;

TEST_CASE("log volatility transition") {
    StateEqSpec spec;
    spec.phi = 0.95;
    REQUIRE(transition_logh(0.0, spec, 0.0) == 0.0);
    spec.phi = 0.9;
    REQUIRE(transition_logh(1.0, spec, 0.1) == Catch::Approx(1.0).margin(1e-15));
    spec.phi = 1.0;
    REQUIRE(transition_logh(-2.0, spec, 0.5) == Catch::Approx(-1.5).margin(1e-15));
}

TEST_CASE("shape transition with exogenous terms") {
    StateEqSpec spec;
    spec.phi = 0.98;
    REQUIRE(transition_lambda(0.0, spec, 0.0) == 0.0);

    spec.exo_coeffs = Eigen::VectorXd::Constant(1, -0.26);
    spec.exo_series = Eigen::MatrixXd::Ones(10, 1);
    Eigen::VectorXd row = Eigen::VectorXd::Ones(1);
    REQUIRE(transition_lambda(1.0, spec, row, 0.0) == Catch::Approx(0.72).margin(1e-12));

    spec.phi = 1.0;
    spec.exo_coeffs = Eigen::VectorXd::Zero(1);
    REQUIRE(transition_lambda(0.5, spec, Eigen::VectorXd::Zero(1), -0.2) ==
            Catch::Approx(0.3).margin(1e-15));

    // dimension mismatch
    spec.exo_coeffs = Eigen::VectorXd::Ones(2);
    REQUIRE_THROWS_AS(transition_lambda(0.0, spec, Eigen::VectorXd::Ones(1), 0.0),
                      std::invalid_argument);
}

TEST_CASE("state equation validation") {
    StateEqSpec spec;
    spec.sigma2 = -1.0;
    REQUIRE_THROWS_AS(spec.validate(10), std::invalid_argument);
    spec.sigma2 = 0.1;
    spec.exo_coeffs = Eigen::VectorXd::Ones(1);
    REQUIRE_THROWS_AS(spec.validate(10), std::invalid_argument); // coeffs without series
    spec.exo_series = Eigen::MatrixXd::Ones(10, 2);
    REQUIRE_THROWS_AS(spec.validate(10), std::invalid_argument); // width mismatch
    spec.exo_series = Eigen::MatrixXd::Ones(10, 1);
    REQUIRE_NOTHROW(spec.validate(10));
    REQUIRE_THROWS_AS(spec.validate(11), std::invalid_argument); // series too short
}

TEST_CASE("stationary variance of a simulated path") {
    Rng rng(42);
    const int T = 100000;
    for (auto [phi, sigma2] : std::vector<std::pair<double, double>>{{0.95, 0.04}, {0.8, 0.25}}) {
        StateEqSpec spec;
        spec.phi = phi;
        spec.sigma2 = sigma2;
        const double sd = std::sqrt(sigma2);
        std::vector<double> path(T);
        double s = 0.0;
        for (int t = 0; t < T; ++t) {
            s = transition_logh(s, spec, rng.normal(0.0, sd));
            path[t] = s;
        }
        const double target = sigma2 / (1.0 - phi * phi);
        REQUIRE(oracles::variance(path) == Catch::Approx(target).epsilon(0.05));
    }
}

TEST_CASE("negative exogenous coefficient lowers the mean path after a step increase") {
    Rng rng(9);
    const int T = 60, reps = 10000;
    StateEqSpec spec;
    spec.phi = 0.9;
    spec.sigma2 = 0.01;
    spec.exo_coeffs = Eigen::VectorXd::Constant(1, -0.26);

    // exogenous input steps from 0 to +2 at t = 30
    Eigen::MatrixXd exo = Eigen::MatrixXd::Zero(T, 1);
    for (int t = 30; t < T; ++t) exo(t, 0) = 2.0;
    spec.exo_series = exo;

    double before = 0.0, after = 0.0;
    for (int r = 0; r < reps; ++r) {
        double lam = 0.0;
        for (int t = 1; t <= T; ++t) {
            lam = transition_lambda(lam, spec, exo.row(t - 1), rng.normal(0.0, 0.1));
            if (t == 29) before += lam;
            if (t == T) after += lam;
        }
    }
    before /= reps;
    after /= reps;
    REQUIRE(after < before);
    REQUIRE(after < -0.2); // well below zero once the step feeds through
}
