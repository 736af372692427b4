#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "kappaest/parallel.hpp"
#include "kappaest/state_algebra.hpp"

namespace kappaest {

// Normal-ordered two-mode ladder polynomial. A monomial key (p1,q1,p2,q2)
// stands for (a1^dag)^p1 a1^q1 (a2^dag)^p2 a2^q2.
struct NormalOrderedPoly {
    using Key = std::array<int, 4>;
    std::map<Key, Complex> monomials;

    static NormalOrderedPoly constant(Complex c);
    // a_mode or a_mode^dag, mode in {1, 2}.
    static NormalOrderedPoly ladder(int mode, bool dagger);

    NormalOrderedPoly& operator+=(const NormalOrderedPoly& other);
    NormalOrderedPoly& operator*=(Complex c);
    // Product with normal reordering via a^q a+^r = sum_k k! C(q,k) C(r,k)
    // a+^(r-k) a^(q-k), applied per mode.
    NormalOrderedPoly operator*(const NormalOrderedPoly& other) const;
    NormalOrderedPoly operator+(const NormalOrderedPoly& other) const;
    NormalOrderedPoly operator-(const NormalOrderedPoly& other) const;

    Complex constant_term() const;
};

// EPR observables X = (x1 - x2)/sqrt2, P = (p1 + p2)/sqrt2 and their squares
// in normal order (quadrature convention x = (a + a^dag)/sqrt2).
struct EprPolys {
    NormalOrderedPoly X;
    NormalOrderedPoly X2;
    NormalOrderedPoly P;
    NormalOrderedPoly P2;
};
EprPolys normal_order_X_ops();

// n1 + n2
NormalOrderedPoly total_number_poly();

// Tr(rho * poly) using <a'|(a+)^p a^q|a> = conj(a')^p a^q <a'|a>.
Complex dyad_expectation(const DyadMix& state, const NormalOrderedPoly& poly);

std::pair<double, double> mean_var_X(const DyadMix& state);
std::pair<double, double> mean_var_P(const DyadMix& state);
double mean_photons(const DyadMix& state);

// Probability density samples on a uniform grid.
struct GridDensity {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<double> values;

    double dx() const { return (x_max - x_min) / double(values.size() - 1); }
    double point(std::size_t i) const { return x_min + double(i) * dx(); }
    double integral() const;  // trapezoid
    std::pair<double, double> mean_variance() const;
};

// W(X,P) = <X,P|rho|X,P> on the outer grid X x P, row index X, column P.
std::vector<std::vector<double>> joint_distribution(
    const DyadMix& state, const std::vector<double>& x_grid,
    const std::vector<double>& p_grid, Exec exec = Exec::parallel);

// Marginal of W(X,P) in X, with the P integration done analytically per dyad
// term. Renormalized to unit trapezoidal integral. Throws if the grid misses
// more than 1e-8 of the mass.
GridDensity marginal_X(const DyadMix& state, double x_min, double x_max,
                       std::size_t points, Exec exec = Exec::parallel);

// Convenience grid: mean +- 8 sigma, 16384 points (resolves the cosine
// fringes of the cat-state densities).
GridDensity marginal_X_auto(const DyadMix& state, std::size_t points = 16384,
                            Exec exec = Exec::parallel);

}  // namespace kappaest
