#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kappaest/observables.hpp"
#include "kappaest/probes.hpp"

namespace kappaest {

// kappa_est = c0 + c1 * mean(samples)
struct EstimatorCoeffs {
    double c0 = 0.0;
    double c1 = 0.0;
};

struct RunConfig {
    ProbeSpec spec;
    double kappa_true = 0.0;
    double n_tot = 0.0;        // photon budget per run
    int n_meas = 1;            // measurements N per run
    int runs = 10000;
    std::uint64_t seed = 0;
    std::size_t grid_points = 16384;
};

struct ErrorReport {
    double analytic_mse = 0.0;
    double empirical_mse = 0.0;
    double empirical_stderr = 0.0;  // NaN when runs == 1
    int runs = 0;
};

// Coefficients of the linearized estimator: c1 = -2/x0, c0 = 2.
EstimatorCoeffs linearize(const ProbeSpec& spec);

double estimate_kappa(const EstimatorCoeffs& coeffs,
                      std::span<const double> samples);

// Delta kappa^2 = (<n>/n_tot) * DeltaX^2(kappa) * slope(0)^{-2}
double analytic_mse(const ProbeSpec& spec, double kappa, double n_tot);

// splitmix64-style derivation of independent per-run seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Inverse-CDF draws from the X marginal of `state`. Deterministic given seed.
std::vector<double> sample_X(const DyadMix& state, std::size_t count,
                             std::uint64_t seed,
                             std::size_t grid_points = 16384);

// Same, reusing a prebuilt marginal (the expensive part across many runs).
std::vector<double> sample_X(const GridDensity& density, std::size_t count,
                             std::uint64_t seed);

// Monte Carlo average of (kappa - kappa_est)^2 over independent simulated
// runs. Runs execute in parallel with per-run seeds; the reduction is a
// serial sum over the per-run results, so the report is identical for both
// execution policies.
ErrorReport empirical_mse(const RunConfig& config, Exec exec = Exec::parallel);

}  // namespace kappaest
