#include "kappaest/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kappaest/estimation.hpp"

namespace kappaest {

namespace {

constexpr double kAlphaMax = 6.0;
constexpr double kMinPhotonsPerMeasurement = 0.05;
constexpr double kGoldenTol = 1e-6;

double superposition_cost(ProbeClass cls, double alpha) {
    return photon_number(ProbeSpec{cls, alpha, 0.0});
}

// mse at the budget-exact displacement; infinity when infeasible.
double mse_at(ProbeClass cls, double alpha, double n_tot, int n_meas,
              double kappa) {
    const auto x0 = solve_x0(cls, alpha, n_tot, n_meas);
    if (!x0) return std::numeric_limits<double>::infinity();
    return analytic_mse(ProbeSpec{cls, alpha, *x0}, kappa, n_tot);
}

}  // namespace

std::optional<double> solve_x0(ProbeClass cls, double alpha, double n_tot,
                               int n_meas) {
    if (n_tot <= 0.0 || n_meas < 1) {
        throw std::invalid_argument("solve_x0: need n_tot > 0 and n_meas >= 1");
    }
    const double budget = n_tot / double(n_meas) - superposition_cost(cls, alpha);
    if (budget <= 0.0) return std::nullopt;
    return std::sqrt(budget);
}

OptimumRecord minimize_mse(ProbeClass cls, double n_tot, double kappa,
                           double alpha_step) {
    if (n_tot <= 0.0 || kappa < 0.0 || alpha_step <= 0.0) {
        throw std::invalid_argument("minimize_mse: bad arguments");
    }
    const bool scan_alpha = (cls == ProbeClass::I || cls == ProbeClass::II);
    const int n_max =
        std::max(1, int(std::floor(n_tot / kMinPhotonsPerMeasurement)));
    const int alpha_cells =
        scan_alpha ? int(std::round(kAlphaMax / alpha_step)) : 0;

    double best_mse = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0;
    int best_n = 0;
    // Ascending loops with strict improvement give the tie-break order:
    // smaller alpha first, then smaller N.
    for (int ia = 0; ia <= alpha_cells; ++ia) {
        const double alpha = double(ia) * alpha_step;
        for (int n = 1; n <= n_max; ++n) {
            const double mse = mse_at(cls, alpha, n_tot, n, kappa);
            if (mse < best_mse * (1.0 - 1e-15)) {
                best_mse = mse;
                best_alpha = alpha;
                best_n = n;
            }
        }
    }
    if (best_n == 0) {
        throw std::runtime_error("minimize_mse: no feasible point");
    }

    if (scan_alpha) {
        // Golden-section refinement around the best grid cell, N fixed.
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = std::max(0.0, best_alpha - alpha_step);
        double hi = std::min(kAlphaMax, best_alpha + alpha_step);
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = mse_at(cls, x1, n_tot, best_n, kappa);
        double f2 = mse_at(cls, x2, n_tot, best_n, kappa);
        while (hi - lo > kGoldenTol) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = mse_at(cls, x1, n_tot, best_n, kappa);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = mse_at(cls, x2, n_tot, best_n, kappa);
            }
        }
        const double alpha_ref = 0.5 * (lo + hi);
        const double mse_ref = mse_at(cls, alpha_ref, n_tot, best_n, kappa);
        if (mse_ref < best_mse) {
            best_alpha = alpha_ref;
            best_mse = mse_ref;
        }
    }

    OptimumRecord rec;
    rec.cls = cls;
    rec.alpha_star = best_alpha;
    rec.x0_star = *solve_x0(cls, best_alpha, n_tot, best_n);
    rec.n_meas_star = best_n;
    rec.mse_star = best_mse;
    return rec;
}

std::vector<ImprovementPoint> improvement_curve(
    std::span<const double> n_tot_values, double kappa) {
    if (n_tot_values.empty()) {
        throw std::invalid_argument("improvement_curve: empty budget list");
    }
    std::vector<ImprovementPoint> out;
    out.reserve(n_tot_values.size());
    for (double n_tot : n_tot_values) {
        if (n_tot <= 0.0) {
            throw std::invalid_argument("improvement_curve: budgets must be > 0");
        }
        const double mse_iii =
            minimize_mse(ProbeClass::III, n_tot, kappa).mse_star;
        const double mse_i = minimize_mse(ProbeClass::I, n_tot, kappa).mse_star;
        const double mse_ii =
            minimize_mse(ProbeClass::II, n_tot, kappa).mse_star;
        out.push_back({n_tot, (mse_iii - mse_i) / mse_iii,
                       (mse_iii - mse_ii) / mse_iii});
    }
    return out;
}

}  // namespace kappaest
