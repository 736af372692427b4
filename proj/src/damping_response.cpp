#include "kappaest/damping_response.hpp"

#include <cmath>
#include <stdexcept>

namespace kappaest {

double mean_X_damped(double x0, double kappa) {
    if (kappa < 0.0) {
        throw std::invalid_argument("mean_X_damped: kappa must be >= 0");
    }
    return x0 * std::exp(-0.5 * kappa);
}

double var_X_damped(ProbeClass cls, double alpha, double kappa) {
    if (kappa < 0.0) {
        throw std::invalid_argument("var_X_damped: kappa must be >= 0");
    }
    const double a2 = alpha * alpha;
    const double denom = 1.0 + std::exp(0.5 * a2);
    switch (cls) {
        case ProbeClass::I: {
            const double f = 1.0 + std::exp(-0.5 * kappa);
            return 0.5 - a2 * f * f / (8.0 * denom);
        }
        case ProbeClass::II: {
            const double f = 1.0 + std::exp(-kappa);
            return 0.5 - a2 * f / (4.0 * denom);
        }
        case ProbeClass::III:
        case ProbeClass::IV:
            return 0.5;
    }
    throw std::invalid_argument("var_X_damped: unknown probe class");
}

double var_P_initial(ProbeClass cls, double alpha) {
    if (cls != ProbeClass::II) return 0.5;
    const double a2 = alpha * alpha;
    const double e = std::exp(0.5 * a2);
    return 0.5 + a2 * e / (2.0 * (1.0 + e));
}

double slope_at_zero(double x0) { return -0.5 * x0; }

}  // namespace kappaest
