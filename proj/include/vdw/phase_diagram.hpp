#pragma once

// Spinodal curve, saturation dome and zone classification in the (tau, e) plane.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <vdw/fractions.hpp>
#include <vdw/thermo.hpp>

namespace vdw {

// Coexisting states at one temperature. x1 is the liquid (small tau) branch.
struct SaturationPair {
    TauE x1;
    TauE x2;
    double p_star = 0.0;
    double T_star = 0.0;
    double mu_star = 0.0;
};

enum class Zone {
    Spinodal,
    MetastableLiquid,
    MetastableVapor,
    StableLiquid,
    StableVapor,
    Supercritical
};

std::string to_string(Zone z);

enum class Side { Liquid, Vapor };

// g(tau) = 2 a Cv (tau-b)^2 / (R tau^3) - a/tau, where det(H_s) vanishes.
double spinodal_energy(const EosParams& eos, double tau);

// Volumes where dp/dtau = 0 on the isotherm T < Tc (liquid side first).
struct SpinodalVolumes {
    double tau_liquid = 0.0;
    double tau_vapor = 0.0;
};
SpinodalVolumes spinodal_volumes(const EosParams& eos, double T);

// Equal pressure and chemical potential at temperature T.
// `guess` holds (tau1, tau2) from a neighbouring temperature.
SaturationPair saturation_at_temperature(const EosParams& eos, double T,
                                         std::optional<std::pair<double, double>> guess = {});

class DomeTable {
public:
    static constexpr int kDefaultSamples = 512;
    static constexpr double kDefaultTmin = 0.7;

    static DomeTable build(const EosParams& eos, int n_samples = kDefaultSamples,
                           double T_min = kDefaultTmin);

    const EosParams& eos() const noexcept { return eos_; }
    const CriticalPoint& critical() const noexcept { return crit_; }
    // Increasing in T. The last row is the critical point itself.
    const std::vector<SaturationPair>& rows() const noexcept { return rows_; }

    // Energy of the dome boundary above tau. Uses the table inside its tau range and a
    // direct solve in T below T_min; throws DomainError further out.
    double g_star(double tau) const;

    // Row with temperature closest to T.
    const SaturationPair& nearest(double T) const;

private:
    DomeTable() = default;
    double branch_temperature(double tau, Side side) const;

    EosParams eos_;
    CriticalPoint crit_;
    std::vector<SaturationPair> rows_;
    // Monotone cubic interpolants e(tau) per branch and their tau ranges.
    std::function<double(double)> liq_, vap_;
    double liq_lo_ = 0.0, vap_hi_ = 0.0;
};

Zone classify(const DomeTable& dome, TauE x);

inline bool under_dome(Zone z) {
    return z == Zone::Spinodal || z == Zone::MetastableLiquid || z == Zone::MetastableVapor;
}

struct EquilibriumFractions {
    // Branch 1 is the vapor phase in r_star; r_sharp is its complement.
    Fractions r_star;
    Fractions r_sharp;
    SaturationPair pair;
    double phi_liquid = 0.0;
};

// Lever rule on the saturation segment through x. Throws NotUnderDome.
EquilibriumFractions equilibrium_fractions(const DomeTable& dome, TauE x);

double concave_hull_entropy(const DomeTable& dome, TauE x);

// Root y != x on the requested side of tau_c of
//   s(y|x) = 0,  mu/T(y) = mu/T(x).
// Throws NoDistinctRoot when none is found.
TauE tangent_state(const EosParams& eos, TauE x, Side side);

}  // namespace vdw
