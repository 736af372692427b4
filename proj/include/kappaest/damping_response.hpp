#pragma once

#include "kappaest/probes.hpp"

namespace kappaest {

// Closed-form first and second moments of X under amplitude damping of
// mode 1, used as fast kernels by the optimizer and validated against the
// dyad pipeline and the Fock integrator in the tests.

// <X>(kappa) = x0 e^{-kappa/2}, identical for all four probe classes.
double mean_X_damped(double x0, double kappa);

// Damped variance of X:
//   I:      1/2 - alpha^2 (1 + e^{-kappa/2})^2 / (8 (1 + e^{alpha^2/2}))
//   II:     1/2 - alpha^2 (1 + e^{-kappa})     / (4 (1 + e^{alpha^2/2}))
//   III/IV: 1/2
// Independent of x0 (damping is displacement covariant).
double var_X_damped(ProbeClass cls, double alpha, double kappa);

// Undamped variance of P:
//   II:          1/2 + alpha^2 e^{alpha^2/2} / (2 (1 + e^{alpha^2/2}))
//   I, III, IV:  1/2
double var_P_initial(ProbeClass cls, double alpha);

// d<X>(kappa)/dkappa at kappa = 0, i.e. -x0/2.
double slope_at_zero(double x0);

}  // namespace kappaest
