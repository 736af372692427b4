#include "kappaest/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kappaest {

namespace {

double falling_product(int q, int r, int k) {
    // k! * C(q,k) * C(r,k)
    double v = 1.0;
    for (int j = 0; j < k; ++j) {
        v *= double(q - j) * double(r - j) / double(j + 1);
    }
    // multiply by k!
    for (int j = 2; j <= k; ++j) v *= double(j);
    return v;
}

// Single-mode reordering a^q a+^r -> sum_k k! C(q,k) C(r,k) a+^(r-k) a^(q-k).
void mode_product(int p, int q, int r, int s,
                  std::vector<std::pair<std::pair<int, int>, double>>& out) {
    out.clear();
    const int kmax = std::min(q, r);
    for (int k = 0; k <= kmax; ++k) {
        out.push_back({{p + r - k, q + s - k}, falling_product(q, r, k)});
    }
}

}  // namespace

NormalOrderedPoly NormalOrderedPoly::constant(Complex c) {
    NormalOrderedPoly p;
    p.monomials[{0, 0, 0, 0}] = c;
    return p;
}

NormalOrderedPoly NormalOrderedPoly::ladder(int mode, bool dagger) {
    if (mode != 1 && mode != 2) {
        throw std::invalid_argument("ladder: mode must be 1 or 2");
    }
    NormalOrderedPoly p;
    Key key{0, 0, 0, 0};
    const int slot = (mode == 1) ? (dagger ? 0 : 1) : (dagger ? 2 : 3);
    key[slot] = 1;
    p.monomials[key] = 1.0;
    return p;
}

NormalOrderedPoly& NormalOrderedPoly::operator+=(
    const NormalOrderedPoly& other) {
    for (const auto& [k, c] : other.monomials) monomials[k] += c;
    return *this;
}

NormalOrderedPoly& NormalOrderedPoly::operator*=(Complex c) {
    for (auto& [k, v] : monomials) v *= c;
    return *this;
}

NormalOrderedPoly NormalOrderedPoly::operator+(
    const NormalOrderedPoly& other) const {
    NormalOrderedPoly out = *this;
    out += other;
    return out;
}

NormalOrderedPoly NormalOrderedPoly::operator-(
    const NormalOrderedPoly& other) const {
    NormalOrderedPoly out = *this;
    NormalOrderedPoly neg = other;
    neg *= -1.0;
    out += neg;
    return out;
}

NormalOrderedPoly NormalOrderedPoly::operator*(
    const NormalOrderedPoly& other) const {
    NormalOrderedPoly out;
    std::vector<std::pair<std::pair<int, int>, double>> m1, m2;
    for (const auto& [ka, ca] : monomials) {
        for (const auto& [kb, cb] : other.monomials) {
            mode_product(ka[0], ka[1], kb[0], kb[1], m1);
            mode_product(ka[2], ka[3], kb[2], kb[3], m2);
            for (const auto& [e1, f1] : m1) {
                for (const auto& [e2, f2] : m2) {
                    Key key{e1.first, e1.second, e2.first, e2.second};
                    out.monomials[key] += ca * cb * f1 * f2;
                }
            }
        }
    }
    return out;
}

Complex NormalOrderedPoly::constant_term() const {
    auto it = monomials.find(Key{0, 0, 0, 0});
    return it == monomials.end() ? Complex(0.0) : it->second;
}

EprPolys normal_order_X_ops() {
    using P = NormalOrderedPoly;
    const P a1 = P::ladder(1, false), a1d = P::ladder(1, true);
    const P a2 = P::ladder(2, false), a2d = P::ladder(2, true);

    P X = a1 + a1d - a2 - a2d;
    X *= 0.5;
    P Pp = a1 - a1d + a2 - a2d;
    Pp *= Complex(0.0, -0.5);
    return EprPolys{X, X * X, Pp, Pp * Pp};
}

NormalOrderedPoly total_number_poly() {
    using P = NormalOrderedPoly;
    return P::ladder(1, true) * P::ladder(1, false) +
           P::ladder(2, true) * P::ladder(2, false);
}

namespace {

Complex ipow(Complex z, int n) {
    Complex r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace

Complex dyad_expectation(const DyadMix& state, const NormalOrderedPoly& poly) {
    Complex result = 0.0;
    for (const auto& t : state.terms) {
        const Complex ov =
            overlap(t.bra1, t.ket1) * overlap(t.bra2, t.ket2);
        const Complex b1 = std::conj(t.bra1), b2 = std::conj(t.bra2);
        Complex acc = 0.0;
        for (const auto& [k, c] : poly.monomials) {
            acc += c * ipow(b1, k[0]) * ipow(t.ket1, k[1]) * ipow(b2, k[2]) *
                   ipow(t.ket2, k[3]);
        }
        result += t.weight * ov * acc;
    }
    return result;
}

namespace {

std::pair<double, double> mean_var_of(const DyadMix& state,
                                      const NormalOrderedPoly& op,
                                      const NormalOrderedPoly& op2) {
    const Complex tr = state.trace();
    if (std::abs(tr - 1.0) > 1e-6) {
        throw std::invalid_argument(
            "mean_var: state trace deviates from 1 by more than 1e-6");
    }
    const double mean = dyad_expectation(state, op).real();
    const double second = dyad_expectation(state, op2).real();
    return {mean, second - mean * mean};
}

}  // namespace

std::pair<double, double> mean_var_X(const DyadMix& state) {
    const auto ops = normal_order_X_ops();
    return mean_var_of(state, ops.X, ops.X2);
}

std::pair<double, double> mean_var_P(const DyadMix& state) {
    const auto ops = normal_order_X_ops();
    return mean_var_of(state, ops.P, ops.P2);
}

double mean_photons(const DyadMix& state) {
    return dyad_expectation(state, total_number_poly()).real();
}

double GridDensity::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        s += 0.5 * (values[i] + values[i + 1]);
    }
    return s * dx();
}

std::pair<double, double> GridDensity::mean_variance() const {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double xa = point(i), xb = point(i + 1);
        const double fa = values[i], fb = values[i + 1];
        m0 += 0.5 * (fa + fb);
        m1 += 0.5 * (fa * xa + fb * xb);
        m2 += 0.5 * (fa * xa * xa + fb * xb * xb);
    }
    m1 /= m0;
    m2 /= m0;
    return {m1, m2 - m1 * m1};
}

namespace {

// <x_theta|alpha> = pi^-1/4 exp(-x^2/2 + sqrt2 x u - u^2/2 - |alpha|^2/2)
// with u = alpha e^{-i theta}.
Complex quad_amplitude(double x, Complex alpha, Complex rotated) {
    static const double norm = std::pow(std::numbers::pi, -0.25);
    return norm * std::exp(-0.5 * x * x + std::numbers::sqrt2 * x * rotated -
                           0.5 * rotated * rotated - 0.5 * std::norm(alpha));
}

}  // namespace

std::vector<std::vector<double>> joint_distribution(
    const DyadMix& state, const std::vector<double>& x_grid,
    const std::vector<double>& p_grid, Exec exec) {
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (x_grid[i] <= x_grid[i - 1]) {
            throw std::invalid_argument("joint_distribution: X grid not increasing");
        }
    }
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        if (p_grid[i] <= p_grid[i - 1]) {
            throw std::invalid_argument("joint_distribution: P grid not increasing");
        }
    }
    // |X,P> = U_BS |p=P>_1 |x=-X>_2, so evaluate on the back-transformed state.
    const DyadMix rot = apply_beam_splitter(state, /*inverse=*/true);
    const Complex mi(0.0, -1.0);

    std::vector<std::vector<double>> w(x_grid.size(),
                                       std::vector<double>(p_grid.size(), 0.0));
    const long nx = long(x_grid.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long ix = 0; ix < nx; ++ix) {
        const double X = x_grid[std::size_t(ix)];
        for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
            const double Pv = p_grid[ip];
            Complex val = 0.0;
            for (const auto& t : rot.terms) {
                // mode 1 at theta = pi/2 (p quadrature), mode 2 at theta = 0,
                // evaluated at x = -X.
                const Complex f1 = quad_amplitude(Pv, t.ket1, mi * t.ket1) *
                                   std::conj(quad_amplitude(Pv, t.bra1, mi * t.bra1));
                const Complex f2 = quad_amplitude(-X, t.ket2, t.ket2) *
                                   std::conj(quad_amplitude(-X, t.bra2, t.bra2));
                val += t.weight * f1 * f2;
            }
            w[std::size_t(ix)][ip] = val.real();
        }
    }
    return w;
}

GridDensity marginal_X(const DyadMix& state, double x_min, double x_max,
                       std::size_t points, Exec exec) {
    if (points < 2 || x_max <= x_min) {
        throw std::invalid_argument("marginal_X: bad grid");
    }
    const DyadMix rot = apply_beam_splitter(state, /*inverse=*/true);

    // Per dyad term the P integral is Gaussian and evaluates to the mode-1
    // overlap; what is left is c * exp(-X^2 + b X) with the coefficients below.
    struct TermCoeff {
        Complex c;
        Complex b;
    };
    std::vector<TermCoeff> coeffs;
    coeffs.reserve(rot.terms.size());
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (const auto& t : rot.terms) {
        const Complex beta = t.ket2, beta_c = std::conj(t.bra2);
        const Complex c = t.weight * overlap(t.bra1, t.ket1) * inv_sqrt_pi *
                          std::exp(-0.5 * (beta * beta + beta_c * beta_c) -
                                   0.5 * (std::norm(t.ket2) + std::norm(t.bra2)));
        coeffs.push_back({c, -std::numbers::sqrt2 * (beta + beta_c)});
    }

    GridDensity g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.values.assign(points, 0.0);
    const double h = (x_max - x_min) / double(points - 1);
    const long n = long(points);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long i = 0; i < n; ++i) {
        const double x = x_min + double(i) * h;
        Complex val = 0.0;
        for (const auto& tc : coeffs) {
            val += tc.c * std::exp(-x * x + tc.b * x);
        }
        double v = val.real();
        if (v < -1e-9) {
            throw std::runtime_error("marginal_X: significantly negative density");
        }
        g.values[std::size_t(i)] = std::max(v, 0.0);
    }

    const double raw = g.integral();
    const double tr = state.trace().real();
    if (std::abs(raw - tr) > 1e-8 * std::max(1.0, std::abs(tr))) {
        throw std::runtime_error(
            "marginal_X: grid too narrow, tail mass exceeds 1e-8");
    }
    for (auto& v : g.values) v /= raw;
    return g;
}

GridDensity marginal_X_auto(const DyadMix& state, std::size_t points,
                            Exec exec) {
    const auto [mean, var] = mean_var_X(state);
    // Fringes can squeeze the variance below the vacuum value while the
    // Gaussian envelopes keep their width, so never go below sigma^2 = 1/2
    // when sizing the window.
    const double sigma = std::sqrt(std::max(var, 0.5));
    return marginal_X(state, mean - 8.0 * sigma, mean + 8.0 * sigma, points,
                      exec);
}

}  // namespace kappaest
