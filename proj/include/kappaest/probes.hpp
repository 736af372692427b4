#pragma once

#include <string>

#include "kappaest/state_algebra.hpp"

namespace kappaest {

// The four probe families entering the damping channel:
//   I   entangled cat: displaced |0> (x) cat, then beam splitter
//   II  separable two-mode cat, displaced in mode 1, no beam splitter
//   III coherent pair |X0/sqrt2>|-X0/sqrt2>, then beam splitter
//   IV  coherent |X0>|0>, no beam splitter
enum class ProbeClass { I, II, III, IV };

struct ProbeSpec {
    ProbeClass cls = ProbeClass::IV;
    double alpha = 0.0;  // cat separation, ignored (treated as 0) for III/IV
    double x0 = 0.0;     // displacement along X
};

bool uses_beam_splitter(ProbeClass cls);

// N_alpha = [2 (1 + e^{-alpha^2/2})]^{-1/2}
double normalization_constant(double alpha);

// The normalized state as seen by the damping channel (classes I and III are
// returned after the beam splitter). <X> = x0 and <P> = 0 for every class.
DyadMix make_probe(const ProbeSpec& spec);

// Closed-form <n1 + n2> of the probe:
//   I:  x0^2 + (alpha^2/4) tanh(alpha^2/4)
//   II: x0^2 + (alpha^2/2) tanh(alpha^2/4)
//   III/IV: x0^2
double photon_number(const ProbeSpec& spec);

const char* probe_class_name(ProbeClass cls);
ProbeClass probe_class_from_name(const std::string& name);

}  // namespace kappaest
