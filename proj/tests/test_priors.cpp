#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "skewvol/priors.hpp"
#include "skewvol/rng.hpp"

using namespace skewvol;

TEST_CASE("minnesota covariance entries") {
    MinnesotaHyper hyper; // paper values
    const int N = 2, p = 2;
    Eigen::VectorXd sig2(N);
    sig2 << 1.0, 1.0;
    const auto v = minnesota_cov(hyper, sig2, N, p);
    const int k = 1 + N * p;
    REQUIRE(v.size() == N * k);
    // equation 1: [intercept, l1 var1 (own), l1 var2 (cross), l2 var1 (own), l2 var2]
    REQUIRE(v[0] == Catch::Approx(100.0));
    REQUIRE(v[1] == Catch::Approx(0.04));
    REQUIRE(v[2] == Catch::Approx(0.001));
    REQUIRE(v[3] == Catch::Approx(0.01)); // 0.04 / 2^2
    // equation 2 own lag 1 sits after its intercept and cross term
    REQUIRE(v[k] == Catch::Approx(100.0));
    REQUIRE(v[k + 2] == Catch::Approx(0.04));
    REQUIRE((v.array() > 0.0).all());
}

TEST_CASE("minnesota cross terms scale with the variance ratio") {
    MinnesotaHyper hyper;
    Eigen::VectorXd sig2(2);
    sig2 << 4.0, 1.0;
    const auto v = minnesota_cov(hyper, sig2, 2, 1);
    // eq 1 (var 1), cross coefficient on var 2: sig2_1/sig2_2 * theta1*theta2
    REQUIRE(v[2] == Catch::Approx(4.0 * 0.001));
    // eq 2, cross coefficient on var 1: sig2_2/sig2_1 * theta1*theta2
    const int k = 3;
    REQUIRE(v[k + 1] == Catch::Approx(0.25 * 0.001));
    // asymmetry is intentional when the scales differ
    REQUIRE(v[2] != v[k + 1]);
}

TEST_CASE("doubling theta1 doubles every non-intercept variance") {
    MinnesotaHyper a, b;
    b.theta1 = 2.0 * a.theta1;
    Eigen::VectorXd sig2(3);
    sig2 << 0.5, 2.0, 1.0;
    const auto va = minnesota_cov(a, sig2, 3, 2);
    const auto vb = minnesota_cov(b, sig2, 3, 2);
    const int k = 1 + 3 * 2;
    for (int i = 0; i < va.size(); ++i) {
        if (i % k == 0) {
            REQUIRE(vb[i] == Catch::Approx(va[i])); // intercept untouched
        } else {
            REQUIRE(vb[i] == Catch::Approx(2.0 * va[i]));
        }
    }
}

TEST_CASE("scale estimation by AR regressions") {
    Rng rng(77);
    const int T = 10000;
    Eigen::MatrixXd data(T, 2);
    double s = 0.0;
    for (int t = 0; t < T; ++t) {
        data(t, 0) = rng.normal();              // white noise, variance 1
        s = 0.9 * s + rng.normal();             // AR(1), innovation variance 1
        data(t, 1) = s;
    }
    const auto scales = estimate_scales(data, 4);
    REQUIRE(scales[0] == Catch::Approx(1.0).epsilon(0.05));
    // the AR fit recovers the innovation variance, not the unconditional one
    REQUIRE(scales[1] == Catch::Approx(1.0).epsilon(0.05));
    REQUIRE(scales[1] < 2.0);

    Eigen::MatrixXd constant = Eigen::MatrixXd::Ones(200, 1);
    REQUIRE_THROWS_AS(estimate_scales(constant, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(estimate_scales(data.topRows(6), 4), std::invalid_argument);
}

TEST_CASE("univariate minnesota variances") {
    MinnesotaHyper hyper;
    UniDesignInfo design;
    design.intercept = true;
    design.y_lags = 2;
    design.exo = {{1, 2.0}};
    const auto v = uni_minnesota_cov(hyper, 1.0, design);
    REQUIRE(v.size() == 4);
    REQUIRE(v[0] == Catch::Approx(100.0));
    REQUIRE(v[1] == Catch::Approx(0.04));
    REQUIRE(v[2] == Catch::Approx(0.01));
    REQUIRE(v[3] == Catch::Approx(1.0 * 0.04 * 0.025 / 2.0));
}

TEST_CASE("log h0 prior mean from an initial AR(4) window") {
    Rng rng(5);
    Eigen::VectorXd y(200);
    for (int t = 0; t < 200; ++t) y[t] = 2.0 * rng.normal(); // variance 4
    const double m = logh0_prior_mean(y);
    REQUIRE(m == Catch::Approx(std::log(4.0)).margin(0.8));
}
