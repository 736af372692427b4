#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kappaest/probes.hpp"

namespace kappaest {

struct OptimumRecord {
    ProbeClass cls = ProbeClass::IV;
    double alpha_star = 0.0;
    double x0_star = 0.0;
    int n_meas_star = 1;
    double mse_star = 0.0;
};

struct ImprovementPoint {
    double n_tot = 0.0;
    double delta_I = 0.0;
    double delta_II = 0.0;
};

// X0 from the budget N <n> = n_tot: X0 = sqrt(n_tot/N - s(alpha)) with
// s(alpha) the superposition photon cost. Empty when no photons are left
// for the displacement.
std::optional<double> solve_x0(ProbeClass cls, double alpha, double n_tot,
                               int n_meas);

// Deterministic minimization of Delta kappa^2 under the photon budget:
// coarse alpha grid (step `alpha_step`, classes I/II only) times all feasible
// N, then golden-section refinement in alpha around the best cell. Ties break
// toward smaller alpha, then smaller N.
OptimumRecord minimize_mse(ProbeClass cls, double n_tot, double kappa,
                           double alpha_step = 0.01);

// delta_{I/II} = (mse_III - mse_{I/II}) / mse_III at the per-class optima.
std::vector<ImprovementPoint> improvement_curve(
    std::span<const double> n_tot_values, double kappa);

}  // namespace kappaest
