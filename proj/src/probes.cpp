#include "kappaest/probes.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kappaest {

bool uses_beam_splitter(ProbeClass cls) {
    return cls == ProbeClass::I || cls == ProbeClass::III;
}

double normalization_constant(double alpha) {
    if (alpha < 0.0) {
        throw std::invalid_argument("normalization_constant: alpha must be >= 0");
    }
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-0.5 * alpha * alpha)));
}

namespace {

std::array<SuperpositionTerm, 2> cat_terms(double alpha) {
    const double n = normalization_constant(alpha);
    return {SuperpositionTerm{Complex(0.0, 0.5 * alpha), n},
            SuperpositionTerm{Complex(0.0, -0.5 * alpha), n}};
}

std::array<SuperpositionTerm, 1> vacuum_term() {
    return {SuperpositionTerm{Complex(0.0), Complex(1.0)}};
}

}  // namespace

DyadMix make_probe(const ProbeSpec& spec) {
    const double x0 = spec.x0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (spec.cls) {
        case ProbeClass::I: {
            const auto vac = vacuum_term();
            const auto cat = cat_terms(spec.alpha);
            DyadMix state = pure_product_state(vac, cat);
            state = apply_displacement(state, 1, Complex(x0 * inv_sqrt2));
            state = apply_displacement(state, 2, Complex(-x0 * inv_sqrt2));
            return apply_beam_splitter(state);
        }
        case ProbeClass::II: {
            const auto cat = cat_terms(spec.alpha);
            DyadMix state = pure_product_state(cat, cat);
            return apply_displacement(state, 1, Complex(x0));
        }
        case ProbeClass::III: {
            const auto vac = vacuum_term();
            DyadMix state = pure_product_state(vac, vac);
            state = apply_displacement(state, 1, Complex(x0 * inv_sqrt2));
            state = apply_displacement(state, 2, Complex(-x0 * inv_sqrt2));
            return apply_beam_splitter(state);
        }
        case ProbeClass::IV: {
            const auto vac = vacuum_term();
            DyadMix state = pure_product_state(vac, vac);
            return apply_displacement(state, 1, Complex(x0));
        }
    }
    throw std::invalid_argument("make_probe: unknown probe class");
}

double photon_number(const ProbeSpec& spec) {
    const double x0sq = spec.x0 * spec.x0;
    const double a2_4 = 0.25 * spec.alpha * spec.alpha;
    switch (spec.cls) {
        case ProbeClass::I:
            return x0sq + a2_4 * std::tanh(a2_4);
        case ProbeClass::II:
            return x0sq + 2.0 * a2_4 * std::tanh(a2_4);
        case ProbeClass::III:
        case ProbeClass::IV:
            return x0sq;
    }
    throw std::invalid_argument("photon_number: unknown probe class");
}

const char* probe_class_name(ProbeClass cls) {
    switch (cls) {
        case ProbeClass::I: return "I";
        case ProbeClass::II: return "II";
        case ProbeClass::III: return "III";
        case ProbeClass::IV: return "IV";
    }
    return "?";
}

ProbeClass probe_class_from_name(const std::string& name) {
    if (name == "I") return ProbeClass::I;
    if (name == "II") return ProbeClass::II;
    if (name == "III") return ProbeClass::III;
    if (name == "IV") return ProbeClass::IV;
    throw std::invalid_argument("unknown probe class: " + name);
}

}  // namespace kappaest
