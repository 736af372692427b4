#pragma once

#include <Eigen/Dense>
#include <span>

#include "kappaest/parallel.hpp"
#include "kappaest/state_algebra.hpp"

namespace kappaest {

// Independent truncated-Fock-space verifier for the coherent-dyad pipeline.
// Everything here is brute force on purpose: series expansions, dense
// matrices and explicit Runge-Kutta integration of the master equation.

struct FockCutoff {
    int dim = 2;  // per-mode dimension, states 0 .. dim-1
};

// Two-mode density matrix in the tensor basis |n1> (x) |n2>, flat index
// n1 * dim + n2.
struct FockDensity {
    int dim = 0;
    Eigen::MatrixXcd rho;
};

// Poisson-tail cutoff rule: dim >= ceil(m^2 + 6m + 12) for the largest
// amplitude magnitude m in the state.
int required_dim(double max_amplitude);

// c_n = e^{-|a|^2/2} a^n / sqrt(n!), renormalized after truncation. Throws
// when the truncated tail mass exceeds 1e-12.
Eigen::VectorXcd coherent_fock(Complex alpha, FockCutoff cutoff);

// Two-mode product vector from per-mode coherent superpositions.
Eigen::VectorXcd superposition_product_fock(
    std::span<const SuperpositionTerm> mode1_terms,
    std::span<const SuperpositionTerm> mode2_terms, FockCutoff cutoff);

// exp((pi/4)(a1 a2^dag - a1^dag a2)), dense. Built blockwise in the total
// photon number, so it is exactly unitary on the truncated space.
Eigen::MatrixXcd beam_splitter_unitary(FockCutoff cutoff);

// Same transformation applied to a state vector without forming the matrix.
Eigen::VectorXcd apply_beam_splitter_fock(const Eigen::VectorXcd& psi,
                                          FockCutoff cutoff,
                                          bool inverse = false);

FockDensity density_from_vector(const Eigen::VectorXcd& psi, FockCutoff cutoff);
FockDensity dyad_to_fock(const DyadMix& state, FockCutoff cutoff);

// Fixed-step RK4 integration of d rho/d kappa = L1 rho (interaction picture,
// dissipator on mode 1 only). The RHS decouples over the mode-2 index pair,
// so the integration runs slice by slice.
FockDensity integrate_master_equation(const FockDensity& rho0,
                                      double kappa_final, int steps,
                                      Exec exec = Exec::parallel);

struct FockMoments {
    double mean_X = 0.0;
    double var_X = 0.0;
    double mean_P = 0.0;
    double var_P = 0.0;
    double mean_n = 0.0;
};

FockMoments fock_moments(const FockDensity& rho);

// Normalized state overlap Tr(r1 r2) / sqrt(Tr r1^2 Tr r2^2).
double fidelity_overlap(const FockDensity& a, const FockDensity& b);

}  // namespace kappaest
