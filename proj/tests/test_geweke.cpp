// Getting-it-right checks for the Gibbs kernels. These are the strongest
// correctness tests in the suite: a formula error anywhere in the
// conditionals shows up as a diverging z-score.
#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "skewvol/uni_sampler.hpp"
#include "support/geweke.hpp"

using namespace skewvol;

namespace {

UniModelSpec intercept_model(int T, ShockSpec shock) {
    UniModelSpec model;
    model.regressors = Eigen::MatrixXd::Ones(T, 1);
    model.shock = shock;
    return model;
}

McmcOptions kernel_opts(PathMethod method) {
    McmcOptions opts;
    opts.particles = 15;
    opts.path_method = method;
    return opts;
}

void print_report(const geweke::Report& rep) {
    for (const auto& s : rep.stats) {
        UNSCOPED_INFO(s.name << ": mc=" << s.mc_mean << " sc=" << s.sc_mean << " z=" << s.z);
    }
}

} // namespace

TEST_CASE("geweke: univariate skew normal kernel", "[geweke]") {
    const auto model = intercept_model(20, ShockSpec::skew_normal());
    const auto prior = geweke::test_priors(1);
    const auto rep = geweke::run_uni_geweke(model, prior, kernel_opts(PathMethod::Pgas), 40000,
                                            40000, 2000, 101);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: univariate skew-t kernel", "[geweke]") {
    const auto model = intercept_model(20, ShockSpec::skew_t(5.0));
    const auto prior = geweke::test_priors(1);
    const auto rep = geweke::run_uni_geweke(model, prior, kernel_opts(PathMethod::Pgas), 40000,
                                            40000, 2000, 202);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: univariate kernel with MH path updates", "[geweke]") {
    const auto model = intercept_model(20, ShockSpec::skew_normal());
    const auto prior = geweke::test_priors(1);
    const auto rep = geweke::run_uni_geweke(model, prior, kernel_opts(PathMethod::Mh), 40000,
                                            60000, 2000, 303);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

namespace {

VarModelSpec bivariate(ShockSpec shock) {
    VarModelSpec model;
    model.n_vars = 2;
    model.lags = 1;
    model.shock = shock;
    model.equations.resize(2);
    return model;
}

VarMcmcOptions var_kernel_opts() {
    VarMcmcOptions opts;
    opts.particles = 15;
    return opts;
}

} // namespace

TEST_CASE("geweke: bivariate VAR skew normal kernel", "[geweke]") {
    const auto model = bivariate(ShockSpec::skew_normal());
    const auto prior = geweke::var_test_priors(model);
    const auto rep =
        geweke::run_var_geweke(model, prior, var_kernel_opts(), 20, 40000, 40000, 2000, 505);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: bivariate VAR skew-t kernel", "[geweke]") {
    const auto model = bivariate(ShockSpec::skew_t(5.0));
    const auto prior = geweke::var_test_priors(model);
    const auto rep =
        geweke::run_var_geweke(model, prior, var_kernel_opts(), 20, 40000, 40000, 2000, 606);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: VAR kernel with reversed equation update order", "[geweke]") {
    const auto model = bivariate(ShockSpec::skew_normal());
    const auto prior = geweke::var_test_priors(model);
    auto opts = var_kernel_opts();
    opts.reverse_equation_order = true;
    const auto rep = geweke::run_var_geweke(model, prior, opts, 20, 60000, 80000, 2000, 707);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: VAR kernel with the triangular Pi draw", "[geweke]") {
    const auto model = bivariate(ShockSpec::skew_normal());
    const auto prior = geweke::var_test_priors(model);
    auto opts = var_kernel_opts();
    opts.triangular_pi = true;
    const auto rep = geweke::run_var_geweke(model, prior, opts, 20, 30000, 30000, 2000, 808);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}

TEST_CASE("geweke: univariate kernel with exogenous skewness regressor", "[geweke]") {
    const int T = 20;
    auto model = intercept_model(T, ShockSpec::skew_normal());
    Eigen::MatrixXd exo(T, 1);
    for (int t = 0; t < T; ++t) exo(t, 0) = std::sin(0.4 * t); // fixed known input
    model.shape_eq.exo_coeffs = Eigen::VectorXd::Zero(1);
    model.shape_eq.exo_series = exo;
    const auto prior = geweke::test_priors(1, 0, 1);
    const auto rep = geweke::run_uni_geweke(model, prior, kernel_opts(PathMethod::Pgas), 40000,
                                            40000, 2000, 404);
    print_report(rep);
    REQUIRE(rep.pass_at_1pct());
}
