#include <cmath>

#include "doctest.h"
#include "kappaest/damping_response.hpp"
#include "kappaest/observables.hpp"

using namespace kappaest;

TEST_CASE("damped mean of X") {
    CHECK(mean_X_damped(2.0, 0.0) == doctest::Approx(2.0));
    CHECK(mean_X_damped(0.0, 1.7) == 0.0);
    CHECK(std::abs(mean_X_damped(2.0, 0.01) - 2.0 * std::exp(-0.005)) < 1e-15);
    CHECK_THROWS(mean_X_damped(1.0, -0.5));
}

TEST_CASE("damped mean matches the dyad pipeline for every class") {
    for (ProbeClass cls :
         {ProbeClass::I, ProbeClass::II, ProbeClass::III, ProbeClass::IV}) {
        for (double kappa : {0.0, 0.01, 0.4}) {
            const auto state = apply_damping(make_probe({cls, 1.6, 2.0}), kappa);
            const auto [mean, var] = mean_var_X(state);
            CHECK(std::abs(mean - mean_X_damped(2.0, kappa)) < 1e-10);
            (void)var;
        }
    }
}

TEST_CASE("damped variance closed forms") {
    const double alpha = 1.6;
    for (ProbeClass cls :
         {ProbeClass::I, ProbeClass::II, ProbeClass::III, ProbeClass::IV}) {
        const double v0 = var_X_damped(cls, alpha, 0.0);
        if (cls == ProbeClass::III || cls == ProbeClass::IV) {
            CHECK(v0 == 0.5);
            CHECK(var_X_damped(cls, alpha, 3.0) == 0.5);
        } else {
            CHECK(v0 == doctest::Approx(0.22).epsilon(0.025));
        }
    }

    // asymptotic values differ between the classes
    const double a2 = alpha * alpha;
    const double denom = 1.0 + std::exp(0.5 * a2);
    const double limit_i = 0.5 - a2 / (8.0 * denom);
    const double limit_ii = 0.5 - a2 / (4.0 * denom);
    CHECK(std::abs(var_X_damped(ProbeClass::I, alpha, 50.0) - limit_i) < 1e-10);
    CHECK(std::abs(var_X_damped(ProbeClass::II, alpha, 50.0) - limit_ii) <
          1e-10);
    CHECK(limit_i > limit_ii);
    CHECK_THROWS(var_X_damped(ProbeClass::I, alpha, -1.0));
}

TEST_CASE("closed forms agree with the dyad pipeline at X0 = 0") {
    for (ProbeClass cls :
         {ProbeClass::I, ProbeClass::II, ProbeClass::III, ProbeClass::IV}) {
        for (double alpha : {0.0, 0.8, 1.6, 3.0}) {
            for (double kappa : {0.0, 0.01, 0.1, 1.0, 5.0}) {
                const auto state =
                    apply_damping(make_probe({cls, alpha, 0.0}), kappa);
                const auto [mean, var] = mean_var_X(state);
                CHECK(std::abs(var - var_X_damped(cls, alpha, kappa)) < 1e-10);
                (void)mean;
            }
        }
    }
}

TEST_CASE("closed forms remain exact for displaced probes") {
    // damping is displacement covariant, so the variance carries no X0
    for (double x0 : {1.0, 3.0}) {
        for (ProbeClass cls : {ProbeClass::I, ProbeClass::II}) {
            for (double kappa : {0.01, 0.3, 1.0}) {
                const auto state =
                    apply_damping(make_probe({cls, 1.6, x0}), kappa);
                const auto [mean, var] = mean_var_X(state);
                CHECK(std::abs(var - var_X_damped(cls, 1.6, kappa)) < 1e-10);
                (void)mean;
            }
        }
    }
}

TEST_CASE("slope of the damped mean at zero") {
    CHECK(slope_at_zero(0.0) == 0.0);
    CHECK(slope_at_zero(2.0) == -1.0);

    // finite-difference oracle on the dyad pipeline
    const double x0 = 2.0, h = 1e-6;
    const auto probe = make_probe({ProbeClass::IV, 0.0, x0});
    const auto [m0, v0] = mean_var_X(probe);
    const auto [mh, vh] = mean_var_X(apply_damping(probe, h));
    CHECK(std::abs((mh - m0) / h - slope_at_zero(x0)) < 1e-6);
    (void)v0;
    (void)vh;
}

TEST_CASE("damped variance is nondecreasing in kappa for classes I and II") {
    for (ProbeClass cls : {ProbeClass::I, ProbeClass::II}) {
        for (double alpha : {0.8, 1.6, 3.0}) {
            double prev = var_X_damped(cls, alpha, 0.0);
            for (double kappa = 0.05; kappa <= 5.0; kappa += 0.05) {
                const double v = var_X_damped(cls, alpha, kappa);
                CHECK(v >= prev - 1e-14);
                prev = v;
            }
        }
    }
}

TEST_CASE("entangled probes lose noise reduction faster") {
    for (double alpha : {0.8, 1.6, 3.0}) {
        for (double kappa = 0.05; kappa <= 5.0; kappa += 0.05) {
            CHECK(var_X_damped(ProbeClass::I, alpha, kappa) >=
                  var_X_damped(ProbeClass::II, alpha, kappa));
        }
    }
}
