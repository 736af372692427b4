#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace kappaest {

using Complex = std::complex<double>;

// One weighted two-mode coherent dyad  weight * |ket1><bra1| (x) |ket2><bra2|.
// The bra amplitudes are stored unconjugated, i.e. bra1 == alpha' in
// |alpha><alpha'|.
struct CoherentDyad {
    Complex ket1;
    Complex bra1;
    Complex ket2;
    Complex bra2;
    Complex weight;
};

// Finite sum of coherent dyads. This representation is closed under beam
// splitting, displacement and amplitude damping, so states never leave it.
struct DyadMix {
    std::vector<CoherentDyad> terms;

    Complex trace() const;
    // Tr rho^2 computed from pairwise dyad overlaps.
    Complex purity() const;
};

// <bra|ket> = exp(-|bra|^2/2 - |ket|^2/2 + conj(bra)*ket)
Complex overlap(Complex bra, Complex ket);

// Exponent of the overlap, kept separate so that fractional powers of
// <bra|ket> can be taken by scaling the exponent (no branch cuts).
Complex overlap_exponent(Complex bra, Complex ket);

// (amplitude, coefficient) pair of one branch of a coherent superposition.
using SuperpositionTerm = std::pair<Complex, Complex>;

// rho = |Psi><Psi| for |Psi> = |phi>_1 (x) |psi>_2 with each factor a finite
// coherent superposition. Trace equals the squared norm of the input vector.
DyadMix pure_product_state(std::span<const SuperpositionTerm> mode1_terms,
                           std::span<const SuperpositionTerm> mode2_terms);

// 50:50 beam splitter: (a, b) -> ((a-b)/sqrt2, (a+b)/sqrt2) on both ket and
// bra amplitudes. `inverse` applies the reverse map.
DyadMix apply_beam_splitter(const DyadMix& state, bool inverse = false);

// Single-mode displacement D(delta), mode in {1, 2}. Weights pick up the
// phase of D(delta)|alpha> = exp(i Im(delta conj(alpha))) |alpha + delta>.
DyadMix apply_displacement(const DyadMix& state, int mode, Complex delta);

// Exact amplitude damping of mode 1 by the scaled constant kappa:
// |a><a'| -> <a'|a>^(1 - e^-kappa) |a e^-kappa/2><a' e^-kappa/2|.
DyadMix apply_damping(const DyadMix& state, double kappa);

// Drops terms whose trace-norm contribution |w||<b1|k1>||<b2|k2>| is below
// tol. Terms are never merged automatically.
DyadMix prune(const DyadMix& state, double tol);

}  // namespace kappaest
