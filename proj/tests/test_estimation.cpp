#include <cmath>
#include <vector>

#include "doctest.h"
#include "kappaest/damping_response.hpp"
#include "kappaest/estimation.hpp"
#include "kappaest/optimizer.hpp"
#include "test_helpers.hpp"

using namespace kappaest;
using namespace kappaest::testing;

TEST_CASE("linearized estimator coefficients") {
    const auto c = linearize({ProbeClass::IV, 0.0, 2.0});
    CHECK(c.c0 == doctest::Approx(2.0));
    CHECK(c.c1 == doctest::Approx(-1.0));
    CHECK_THROWS(linearize({ProbeClass::IV, 0.0, 0.0}));
}

TEST_CASE("kappa estimate from samples") {
    const EstimatorCoeffs c{2.0, -1.0};
    CHECK(estimate_kappa(c, std::vector<double>{2.0}) == doctest::Approx(0.0));
    CHECK(estimate_kappa(c, std::vector<double>{1.99, 1.99}) ==
          doctest::Approx(0.01));
    CHECK_THROWS(estimate_kappa(c, std::vector<double>{}));

    // undamped reading estimates zero; damped mean recovers kappa - kappa^2/4
    const double x0 = 2.0, kappa = 0.01;
    const auto coeffs = linearize({ProbeClass::IV, 0.0, x0});
    const double reading = x0 * std::exp(-0.5 * kappa);
    const double est = estimate_kappa(coeffs, std::vector<double>{reading});
    CHECK(est == doctest::Approx(2.0 * (1.0 - std::exp(-0.005))).epsilon(1e-12));
    CHECK(std::abs(est - (kappa - 0.25 * kappa * kappa)) < 1e-6);

    // affine in the mean: concatenation averages per-set estimates
    const std::vector<double> s1{1.9, 2.1}, s2{2.05, 1.95};
    std::vector<double> both = s1;
    both.insert(both.end(), s2.begin(), s2.end());
    CHECK(estimate_kappa(coeffs, both) ==
          doctest::Approx(0.5 * (estimate_kappa(coeffs, s1) +
                                 estimate_kappa(coeffs, s2))));
}

TEST_CASE("classical analytic error is 2/n_tot for any X0 and N") {
    TestRng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const ProbeClass cls =
            rng.unit() < 0.5 ? ProbeClass::III : ProbeClass::IV;
        const double n_tot = rng.uniform(0.5, 40.0);
        const int n_meas = 1 + int(rng.uniform(0.0, 20.0));
        const auto x0 = solve_x0(cls, 0.0, n_tot, n_meas);
        REQUIRE(x0.has_value());
        const double mse =
            analytic_mse({cls, 0.0, *x0}, rng.uniform(0.0, 0.05), n_tot);
        CHECK(std::abs(mse - 2.0 / n_tot) < 1e-12);
    }
    CHECK(analytic_mse({ProbeClass::III, 0.0, std::sqrt(20.0)}, 0.01, 20.0) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS(analytic_mse({ProbeClass::III, 0.0, 0.0}, 0.01, 20.0));
}

TEST_CASE("sampling from the vacuum marginal") {
    const std::vector<SuperpositionTerm> vac{{Complex(0.0), Complex(1.0)}};
    const auto vacuum = pure_product_state(vac, vac);
    const auto samples = sample_X(vacuum, 100000, 2024);
    double mean = 0.0, m2 = 0.0;
    for (double x : samples) mean += x;
    mean /= double(samples.size());
    for (double x : samples) m2 += (x - mean) * (x - mean);
    m2 /= double(samples.size());
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(m2 - 0.5) < 0.01);
}

TEST_CASE("sampling reproduces the squeezed cat variance") {
    const auto probe = make_probe({ProbeClass::I, 1.6, 0.0});
    const auto samples = sample_X(probe, 100000, 99);
    double mean = 0.0, m2 = 0.0;
    for (double x : samples) mean += x;
    mean /= double(samples.size());
    for (double x : samples) m2 += (x - mean) * (x - mean);
    m2 /= double(samples.size());
    CHECK(std::abs(m2 - 0.2215) < 0.01);
}

TEST_CASE("sampling is deterministic given the seed") {
    const auto probe = make_probe({ProbeClass::II, 1.2, 1.0});
    const auto a = sample_X(probe, 512, 1234);
    const auto b = sample_X(probe, 512, 1234);
    CHECK(a == b);
    const auto c = sample_X(probe, 512, 1235);
    CHECK(a != c);
}

TEST_CASE("empirical error of the classical probe") {
    RunConfig config;
    config.spec = {ProbeClass::IV, 0.0, 3.0};  // X0^2 = n_tot = 9
    config.kappa_true = 0.0;
    config.n_tot = 9.0;
    config.n_meas = 1;
    config.runs = 10000;
    config.seed = 7;
    const auto report = empirical_mse(config);
    CHECK(report.analytic_mse == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(std::abs(report.empirical_mse - report.analytic_mse) <
          3.0 * report.empirical_stderr);
}

TEST_CASE("empirical error of the optimal entangled probe") {
    const auto opt = minimize_mse(ProbeClass::I, 20.0, 0.01);
    RunConfig config;
    config.spec = {ProbeClass::I, opt.alpha_star, opt.x0_star};
    config.kappa_true = 0.01;
    config.n_tot = 20.0;
    config.n_meas = opt.n_meas_star;
    config.runs = 4000;
    config.seed = 21;
    const auto report = empirical_mse(config);
    CHECK(std::abs(report.empirical_mse - report.analytic_mse) <
          3.0 * report.empirical_stderr);
}

TEST_CASE("estimator variance identity for N samples") {
    // var(kappa_est) = c1^2 DeltaX^2(kappa) / N
    const ProbeSpec spec{ProbeClass::II, 1.2, 2.0};
    const double kappa = 0.02;
    const int n_meas = 4;
    RunConfig config;
    config.spec = spec;
    config.kappa_true = kappa;
    config.n_tot = double(n_meas) * photon_number(spec);
    config.n_meas = n_meas;
    config.runs = 8000;
    config.seed = 5;
    const auto report = empirical_mse(config);
    const auto coeffs = linearize(spec);
    const double predicted = coeffs.c1 * coeffs.c1 *
                             var_X_damped(spec.cls, spec.alpha, kappa) /
                             double(n_meas);
    CHECK(std::abs(report.empirical_mse - predicted) <
          3.0 * report.empirical_stderr + 1e-6);
}

TEST_CASE("estimator is unbiased to first order") {
    const ProbeSpec spec{ProbeClass::IV, 0.0, 3.0};
    const double kappa = 0.01;
    const auto coeffs = linearize(spec);
    const auto damped = apply_damping(make_probe(spec), kappa);
    const auto density = marginal_X_auto(damped);
    const int runs = 20000;
    double mean_est = 0.0, m2 = 0.0;
    const auto samples = sample_X(density, runs, 1);
    for (double x : samples) {
        mean_est += coeffs.c0 + coeffs.c1 * x;
    }
    mean_est /= double(runs);
    for (double x : samples) {
        const double e = coeffs.c0 + coeffs.c1 * x;
        m2 += (e - mean_est) * (e - mean_est);
    }
    const double stderr_mean = std::sqrt(m2 / double(runs)) / std::sqrt(double(runs));
    CHECK(std::abs(mean_est - kappa) <
          std::max(3.0 * stderr_mean, 5e-5) + 0.25 * kappa * kappa);
}

TEST_CASE("single-run report marks the standard error unavailable") {
    RunConfig config;
    config.spec = {ProbeClass::IV, 0.0, 2.0};
    config.kappa_true = 0.0;
    config.n_tot = 4.0;
    config.n_meas = 1;
    config.runs = 1;
    config.seed = 3;
    const auto report = empirical_mse(config);
    CHECK(std::isnan(report.empirical_stderr));
    CHECK(report.runs == 1);
}

TEST_CASE("empirical_mse is deterministic and budget checked") {
    RunConfig config;
    config.spec = {ProbeClass::I, 1.6, 2.0};
    config.kappa_true = 0.01;
    config.n_tot = photon_number(config.spec);
    config.n_meas = 1;
    config.runs = 500;
    config.seed = 4242;
    const auto a = empirical_mse(config);
    const auto b = empirical_mse(config);
    CHECK(a.empirical_mse == b.empirical_mse);
    CHECK(a.empirical_stderr == b.empirical_stderr);

    config.n_meas = 2;  // exceeds the budget
    CHECK_THROWS(empirical_mse(config));
}
