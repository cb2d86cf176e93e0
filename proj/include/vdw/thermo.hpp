#pragma once

// Reduced van der Waals equation of state written in the specific volume /
// specific internal energy variables (tau, e). Entropy is the potential:
//
//   s(tau, e) = Cv ln(a/tau + e) + R ln(tau - b) + s0
//   1/T = ds/de,  p/T = ds/dtau,  mu = p tau + e - T s
//
// Everything is nondimensional. All functions are pure.

#include <vdw/errors.hpp>

namespace vdw {

struct EosParams {
    double a = 1.0;   // attraction
    double b = 0.5;   // covolume
    double R = 0.5;   // gas constant
    double Cv = 3.0;  // heat capacity at constant volume
    double s0 = 0.0;  // reference entropy

    // Throws std::invalid_argument unless a, b, R, Cv are positive.
    void validate() const;
};

struct TauE {
    double tau = 0.0;
    double e = 0.0;
};

struct ThermoEval {
    double s = 0.0;
    double T = 0.0;
    double p = 0.0;
    double mu = 0.0;
};

// Second derivatives of s(tau, e).
struct Hessian2 {
    double s_tt = 0.0;
    double s_te = 0.0;
    double s_ee = 0.0;

    double det() const noexcept { return s_tt * s_ee - s_te * s_te; }
};

struct CriticalPoint {
    double tau = 0.0;
    double T = 0.0;
    double e = 0.0;
    double p = 0.0;
};

// Margin used by every domain guard.
inline constexpr double kDomainMargin = 1e-12;

bool in_domain(const EosParams& eos, TauE x) noexcept;
// Throws DomainError when x is not in the domain.
void check_domain(const EosParams& eos, TauE x);

double entropy(const EosParams& eos, TauE x);
double temperature(const EosParams& eos, TauE x);
double pressure(const EosParams& eos, TauE x);
double chemical_potential(const EosParams& eos, TauE x);
ThermoEval evaluate(const EosParams& eos, TauE x);

// Gradient of s: (p/T, 1/T).
struct EntropyGradient {
    double p_over_T = 0.0;
    double inv_T = 0.0;
};
EntropyGradient entropy_gradient(const EosParams& eos, TauE x);

Hessian2 entropy_hessian(const EosParams& eos, TauE x);

// Isotherm parametrisation: p(tau, T) and e(tau, T).
double isotherm_pressure(const EosParams& eos, double tau, double T);
double isotherm_energy(const EosParams& eos, double tau, double T);
// dp/dtau along an isotherm.
double isotherm_pressure_slope(const EosParams& eos, double tau, double T);

// s(x) - s(y) - grad s(y) . (x - y)
double relative_entropy(const EosParams& eos, TauE x, TauE y);

CriticalPoint critical_point(const EosParams& eos);

}  // namespace vdw
