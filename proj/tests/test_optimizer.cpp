#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kappaest/estimation.hpp"
#include "kappaest/optimizer.hpp"

using namespace kappaest;

TEST_CASE("budget-exact displacement") {
    const auto x0 = solve_x0(ProbeClass::III, 0.0, 9.0, 1);
    REQUIRE(x0.has_value());
    CHECK(*x0 == doctest::Approx(3.0));

    const double cost = photon_number({ProbeClass::I, 1.6, 0.0});
    const auto x0_i = solve_x0(ProbeClass::I, 1.6, 20.0, 1);
    REQUIRE(x0_i.has_value());
    CHECK(*x0_i == doctest::Approx(std::sqrt(20.0 - cost)).epsilon(1e-12));

    // superposition photons alone exhaust a small budget
    CHECK(!solve_x0(ProbeClass::II, 4.0, 2.0, 1).has_value());
    CHECK_THROWS(solve_x0(ProbeClass::I, 1.0, -1.0, 1));
}

TEST_CASE("classical optimum is exactly 2/n_tot with N = 1 by tie-break") {
    for (double n_tot : {5.0, 10.0, 20.0}) {
        const auto rec = minimize_mse(ProbeClass::III, n_tot, 0.01);
        CHECK(rec.mse_star == doctest::Approx(2.0 / n_tot).epsilon(1e-12));
        CHECK(rec.n_meas_star == 1);
        CHECK(rec.alpha_star == 0.0);
        CHECK(rec.x0_star == doctest::Approx(std::sqrt(n_tot)));
    }
}

TEST_CASE("entangled optimum uses all photons in one measurement") {
    for (double n_tot : {5.0, 10.0, 20.0}) {
        const auto rec = minimize_mse(ProbeClass::I, n_tot, 0.01);
        CHECK(rec.n_meas_star == 1);
        CHECK(rec.mse_star < 2.0 / n_tot + 1e-12);
    }
}

TEST_CASE("entangled beats separable beats classical at n_tot = 20") {
    const double n_tot = 20.0, kappa = 0.01;
    const auto i = minimize_mse(ProbeClass::I, n_tot, kappa);
    const auto ii = minimize_mse(ProbeClass::II, n_tot, kappa);
    const auto iii = minimize_mse(ProbeClass::III, n_tot, kappa);
    CHECK(i.mse_star < ii.mse_star);
    CHECK(ii.mse_star < iii.mse_star);
}

TEST_CASE("optimum never loses to the classical baseline") {
    for (ProbeClass cls : {ProbeClass::I, ProbeClass::II}) {
        for (double n_tot : {2.0, 5.0, 12.0, 20.0}) {
            const auto rec = minimize_mse(cls, n_tot, 0.01);
            CHECK(rec.mse_star <= 2.0 / n_tot + 1e-12);
        }
    }
}

TEST_CASE("grid refinement is converged") {
    for (double n_tot : {5.0, 10.0, 20.0}) {
        const auto coarse = minimize_mse(ProbeClass::I, n_tot, 0.01, 0.01);
        const auto fine = minimize_mse(ProbeClass::I, n_tot, 0.01, 0.005);
        CHECK(std::abs(coarse.mse_star - fine.mse_star) < 1e-8);
    }
}

TEST_CASE("budget exactness at the optimum") {
    for (ProbeClass cls : {ProbeClass::I, ProbeClass::II, ProbeClass::IV}) {
        const auto rec = minimize_mse(cls, 14.0, 0.01);
        const double used =
            double(rec.n_meas_star) *
            photon_number({cls, rec.alpha_star, rec.x0_star});
        CHECK(std::abs(used - 14.0) < 1e-9);
    }
}

TEST_CASE("saturated n_tot^-1 scaling of the entangled optimum") {
    std::vector<double> products;
    for (double n_tot : {10.0, 12.0, 14.0, 16.0, 18.0, 20.0}) {
        products.push_back(minimize_mse(ProbeClass::I, n_tot, 0.01).mse_star *
                           n_tot);
    }
    const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
    CHECK((*hi - *lo) / *lo < 0.02);
}

TEST_CASE("improvement curve shape") {
    std::vector<double> budgets;
    for (int n = 2; n <= 20; ++n) budgets.push_back(double(n));
    const auto curve = improvement_curve(budgets, 0.01);
    REQUIRE(curve.size() == budgets.size());
    for (const auto& pt : curve) {
        CHECK(pt.delta_I > pt.delta_II);
        CHECK(pt.delta_II > 0.0);
        CHECK(pt.delta_I <= 1.0);
    }
    CHECK(curve.back().delta_I > 0.5);
    CHECK_THROWS(improvement_curve(std::vector<double>{}, 0.01));
}
