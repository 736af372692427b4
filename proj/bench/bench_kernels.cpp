// Timing comparison of the OpenMP kernels against their serial reference.
// Both paths produce bit-identical results (verified in the test suite);
// this target only reports wall-clock times and speedups.

#include <chrono>
#include <cstdio>
#include <functional>

#include "kappaest/estimation.hpp"
#include "kappaest/fock_oracle.hpp"
#include "kappaest/observables.hpp"
#include "kappaest/parallel.hpp"
#include "kappaest/probes.hpp"

using namespace kappaest;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                name, 1e3 * serial, 1e3 * parallel, serial / parallel);
}

}  // namespace

int main() {
    std::printf("workers available: %d\n\n", worker_count(Exec::parallel));

    // 1. marginal density evaluation on a dense grid
    {
        const auto state =
            apply_damping(make_probe({ProbeClass::I, 1.6, 2.0}), 0.1);
        const auto serial = time_best_of(3, [&] {
            (void)marginal_X(state, -8.0, 12.0, 1 << 17, Exec::serial);
        });
        const auto parallel = time_best_of(3, [&] {
            (void)marginal_X(state, -8.0, 12.0, 1 << 17, Exec::parallel);
        });
        report("marginal_X (131072 pts)", serial, parallel);
    }

    // 2. Monte Carlo estimation runs
    {
        RunConfig config;
        config.spec = {ProbeClass::I, 1.6, 2.0};
        config.kappa_true = 0.01;
        config.n_tot = 4.0 * photon_number(config.spec);
        config.n_meas = 4;
        config.runs = 20000;
        config.seed = 7;
        const auto serial =
            time_best_of(3, [&] { (void)empirical_mse(config, Exec::serial); });
        const auto parallel = time_best_of(
            3, [&] { (void)empirical_mse(config, Exec::parallel); });
        report("empirical_mse (20k runs)", serial, parallel);
    }

    // 3. master-equation integration in the truncated basis
    {
        const FockCutoff cutoff{45};
        const auto rho0 =
            dyad_to_fock(make_probe({ProbeClass::I, 2.5, 0.0}), cutoff);
        const auto serial = time_best_of(2, [&] {
            (void)integrate_master_equation(rho0, 0.5, 40, Exec::serial);
        });
        const auto parallel = time_best_of(2, [&] {
            (void)integrate_master_equation(rho0, 0.5, 40, Exec::parallel);
        });
        report("master eq (dim 45, 40 st)", serial, parallel);
    }

    return 0;
}
