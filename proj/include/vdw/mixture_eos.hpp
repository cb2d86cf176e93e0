#pragma once

// Out-of-equilibrium mixture closure at frozen fractions.

#include <optional>

#include <vdw/fractions.hpp>
#include <vdw/thermo.hpp>

namespace vdw {

struct MixtureEval {
    double p_mix = 0.0;
    double T_mix = 0.0;
    double c2 = 0.0;
    bool hyperbolic() const noexcept { return c2 > 0.0; }
};

// 1/T = xi/T1 + (1-xi)/T2
double mixture_temperature(const EosParams& eos, TauE mix, const Fractions& r);
// p/T = alpha p1/T1 + (1-alpha) p2/T2
double mixture_pressure(const EosParams& eos, TauE mix, const Fractions& r);
// c^2 = -T tau^2 [ v1' H1 v1 / phi + v2' H2 v2 / (1-phi) ],
// v1 = (-alpha, xi p), v2 = (-(1-alpha), (1-xi) p).
double sound_speed_sq(const EosParams& eos, TauE mix, const Fractions& r);
MixtureEval evaluate_mixture(const EosParams& eos, TauE mix, const Fractions& r);

// Partial derivative of the mixture pressure in e at fixed (tau, r).
double mixture_pressure_de(const EosParams& eos, TauE mix, const Fractions& r);

// Internal energy such that mixture_pressure(tau, e, r) = p. Newton from the
// single-phase inversion unless a guess is given. Throws NoConvergence, or
// PhasicOutOfDomain when a phasic volume is out of range.
double energy_from_pressure(const EosParams& eos, double tau, double p, const Fractions& r,
                            std::optional<double> guess = {});

}  // namespace vdw
