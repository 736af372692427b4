#include "kappaest/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kappaest/damping_response.hpp"

namespace kappaest {

EstimatorCoeffs linearize(const ProbeSpec& spec) {
    if (spec.x0 == 0.0) {
        throw std::invalid_argument(
            "linearize: zero signal, first moment insensitive to kappa");
    }
    const double c1 = 1.0 / slope_at_zero(spec.x0);
    return {-c1 * spec.x0, c1};
}

double estimate_kappa(const EstimatorCoeffs& coeffs,
                      std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("estimate_kappa: empty sample set");
    }
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) /
        double(samples.size());
    return coeffs.c0 + coeffs.c1 * mean;
}

double analytic_mse(const ProbeSpec& spec, double kappa, double n_tot) {
    if (n_tot <= 0.0) {
        throw std::invalid_argument("analytic_mse: n_tot must be > 0");
    }
    const double slope = slope_at_zero(spec.x0);
    if (slope == 0.0) {
        throw std::invalid_argument("analytic_mse: zero slope (x0 = 0)");
    }
    return photon_number(spec) / n_tot *
           var_X_damped(spec.cls, spec.alpha, kappa) / (slope * slope);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

// xorshift-free uniform in [0,1): top 53 bits of splitmix64 stream. Keeping
// the generator self-contained pins the sample sequences across platforms.
struct SplitMix {
    std::uint64_t state;
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double next_unit() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }
};

std::vector<double> build_cdf(const GridDensity& density) {
    std::vector<double> cdf(density.values.size(), 0.0);
    const double h = density.dx();
    for (std::size_t i = 1; i < cdf.size(); ++i) {
        cdf[i] = cdf[i - 1] +
                 0.5 * h * (density.values[i - 1] + density.values[i]);
    }
    const double total = cdf.back();
    for (auto& c : cdf) c /= total;
    return cdf;
}

double invert_cdf(const GridDensity& density, const std::vector<double>& cdf,
                  double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return density.x_min;
    if (it == cdf.end()) return density.x_max;
    const std::size_t hi = std::size_t(it - cdf.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
    return density.point(lo) + frac * density.dx();
}

}  // namespace

std::vector<double> sample_X(const GridDensity& density, std::size_t count,
                             std::uint64_t seed) {
    if (count == 0) {
        throw std::invalid_argument("sample_X: count must be >= 1");
    }
    const std::vector<double> cdf = build_cdf(density);
    SplitMix rng{seed};
    std::vector<double> out(count);
    for (auto& x : out) x = invert_cdf(density, cdf, rng.next_unit());
    return out;
}

std::vector<double> sample_X(const DyadMix& state, std::size_t count,
                             std::uint64_t seed, std::size_t grid_points) {
    return sample_X(marginal_X_auto(state, grid_points), count, seed);
}

ErrorReport empirical_mse(const RunConfig& config, Exec exec) {
    if (config.runs < 1 || config.n_meas < 1) {
        throw std::invalid_argument("empirical_mse: runs and n_meas must be >= 1");
    }
    const double budget_used = double(config.n_meas) * photon_number(config.spec);
    if (config.n_tot > 0.0 && budget_used > config.n_tot * (1.0 + 1e-9)) {
        throw std::invalid_argument("empirical_mse: photon budget exceeded");
    }

    const EstimatorCoeffs coeffs = linearize(config.spec);
    const DyadMix damped =
        apply_damping(make_probe(config.spec), config.kappa_true);
    const GridDensity density = marginal_X_auto(damped, config.grid_points);
    const std::vector<double> cdf = build_cdf(density);

    std::vector<double> sq_err(std::size_t(config.runs), 0.0);
    const long runs = config.runs;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long r = 0; r < runs; ++r) {
        SplitMix rng{derive_seed(config.seed, std::uint64_t(r))};
        double sum = 0.0;
        for (int i = 0; i < config.n_meas; ++i) {
            sum += invert_cdf(density, cdf, rng.next_unit());
        }
        const double est = coeffs.c0 + coeffs.c1 * sum / double(config.n_meas);
        const double d = config.kappa_true - est;
        sq_err[std::size_t(r)] = d * d;
    }

    // Serial reduction keeps the report independent of the thread count.
    double mean = 0.0;
    for (double v : sq_err) mean += v;
    mean /= double(config.runs);

    double stderr_of_mean = std::numeric_limits<double>::quiet_NaN();
    if (config.runs > 1) {
        double ss = 0.0;
        for (double v : sq_err) ss += (v - mean) * (v - mean);
        stderr_of_mean =
            std::sqrt(ss / (double(config.runs) * double(config.runs - 1)));
    }

    ErrorReport report;
    report.analytic_mse =
        analytic_mse(config.spec, config.kappa_true,
                     config.n_tot > 0.0 ? config.n_tot : budget_used);
    report.empirical_mse = mean;
    report.empirical_stderr = stderr_of_mean;
    report.runs = config.runs;
    return report;
}

}  // namespace kappaest
