#include "kappaest/state_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace kappaest {

namespace {

bool finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void check_finite(const DyadMix& state, const char* where) {
    for (const auto& t : state.terms) {
        if (!finite(t.ket1) || !finite(t.bra1) || !finite(t.ket2) ||
            !finite(t.bra2) || !finite(t.weight)) {
            throw std::runtime_error(std::string(where) +
                                     ": non-finite dyad produced");
        }
    }
}

}  // namespace

Complex overlap_exponent(Complex bra, Complex ket) {
    return -0.5 * std::norm(bra) - 0.5 * std::norm(ket) + std::conj(bra) * ket;
}

Complex overlap(Complex bra, Complex ket) {
    return std::exp(overlap_exponent(bra, ket));
}

Complex DyadMix::trace() const {
    Complex tr = 0.0;
    for (const auto& t : terms) {
        tr += t.weight * overlap(t.bra1, t.ket1) * overlap(t.bra2, t.ket2);
    }
    return tr;
}

Complex DyadMix::purity() const {
    // Tr(|k><b| |k'><b'|) = <b|k'><b'|k> per mode.
    Complex p = 0.0;
    for (const auto& s : terms) {
        for (const auto& t : terms) {
            p += s.weight * t.weight * overlap(s.bra1, t.ket1) *
                 overlap(t.bra1, s.ket1) * overlap(s.bra2, t.ket2) *
                 overlap(t.bra2, s.ket2);
        }
    }
    return p;
}

DyadMix pure_product_state(std::span<const SuperpositionTerm> mode1_terms,
                           std::span<const SuperpositionTerm> mode2_terms) {
    if (mode1_terms.empty() || mode2_terms.empty()) {
        throw std::invalid_argument(
            "pure_product_state: empty superposition term list");
    }
    DyadMix out;
    out.terms.reserve(mode1_terms.size() * mode1_terms.size() *
                      mode2_terms.size() * mode2_terms.size());
    for (const auto& [a_ket, c_ket] : mode1_terms) {
        for (const auto& [a_bra, c_bra] : mode1_terms) {
            for (const auto& [b_ket, d_ket] : mode2_terms) {
                for (const auto& [b_bra, d_bra] : mode2_terms) {
                    out.terms.push_back(
                        {a_ket, a_bra, b_ket, b_bra,
                         c_ket * std::conj(c_bra) * d_ket * std::conj(d_bra)});
                }
            }
        }
    }
    check_finite(out, "pure_product_state");
    return out;
}

DyadMix apply_beam_splitter(const DyadMix& state, bool inverse) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto map = [&](Complex& a, Complex& b) {
        Complex u, v;
        if (!inverse) {
            u = (a - b) * inv_sqrt2;
            v = (a + b) * inv_sqrt2;
        } else {
            u = (a + b) * inv_sqrt2;
            v = (b - a) * inv_sqrt2;
        }
        a = u;
        b = v;
    };
    DyadMix out = state;
    for (auto& t : out.terms) {
        map(t.ket1, t.ket2);
        map(t.bra1, t.bra2);
    }
    check_finite(out, "apply_beam_splitter");
    return out;
}

DyadMix apply_displacement(const DyadMix& state, int mode, Complex delta) {
    if (mode != 1 && mode != 2) {
        throw std::invalid_argument("apply_displacement: mode must be 1 or 2");
    }
    DyadMix out = state;
    for (auto& t : out.terms) {
        Complex& ket = (mode == 1) ? t.ket1 : t.ket2;
        Complex& bra = (mode == 1) ? t.bra1 : t.bra2;
        const double phase = std::imag(delta * std::conj(ket)) -
                             std::imag(delta * std::conj(bra));
        t.weight *= std::exp(Complex(0.0, phase));
        ket += delta;
        bra += delta;
    }
    check_finite(out, "apply_displacement");
    return out;
}

DyadMix apply_damping(const DyadMix& state, double kappa) {
    if (kappa < 0.0) {
        throw std::invalid_argument("apply_damping: kappa must be >= 0");
    }
    const double decohere = 1.0 - std::exp(-kappa);
    const double shrink = std::exp(-0.5 * kappa);
    DyadMix out = state;
    for (auto& t : out.terms) {
        // <a'|a>^(1-e^-kappa) via the analytic exponent, never via principal
        // powers: the overlap can be negative or complex.
        t.weight *= std::exp(decohere * overlap_exponent(t.bra1, t.ket1));
        t.ket1 *= shrink;
        t.bra1 *= shrink;
    }
    check_finite(out, "apply_damping");
    return out;
}

DyadMix prune(const DyadMix& state, double tol) {
    if (tol < 0.0) {
        throw std::invalid_argument("prune: tol must be >= 0");
    }
    DyadMix out;
    out.terms.reserve(state.terms.size());
    for (const auto& t : state.terms) {
        if (std::abs(t.weight) == 0.0) continue;
        if (tol > 0.0) {
            const double contribution = std::abs(t.weight) *
                                        std::abs(overlap(t.bra1, t.ket1)) *
                                        std::abs(overlap(t.bra2, t.ket2));
            if (contribution < tol) continue;
        }
        out.terms.push_back(t);
    }
    return out;
}

}  // namespace kappaest
