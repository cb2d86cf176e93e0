#pragma once

// Relaxation dynamics of the fractions r = (alpha, phi, xi) at a frozen mixture state.

#include <array>
#include <complex>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <vdw/fractions.hpp>
#include <vdw/phase_diagram.hpp>
#include <vdw/thermo.hpp>

namespace vdw {

struct PhasicDecomposition {
    TauE x1;
    TauE x2;
    double phi = 0.5;
};

// tau1 = alpha tau/phi, tau2 = (1-alpha) tau/(1-phi), and the same for e with xi.
// Throws PhasicOutOfDomain (phase 1 or 2) if a phasic state is not in D_s.
PhasicDecomposition phasic_from_fractions(const EosParams& eos, TauE mix, const Fractions& r);

double mixture_entropy(const EosParams& eos, TauE mix, const Fractions& r);

// Gradient of the mixture entropy with respect to (alpha, phi, xi).
Eigen::Vector3d mixture_entropy_gradient(const EosParams& eos, TauE mix, const Fractions& r);

// Right-hand side: logistic factors times the entropy gradient.
Eigen::Vector3d rhs(const EosParams& eos, TauE mix, const Fractions& r);

// Exact derivative of rhs by the chain rule through the phasic states.
Eigen::Matrix3d jacobian(const EosParams& eos, TauE mix, const Fractions& r);

// Five-point finite differences of rhs, step 1e-6 max(1e-3, |r_i|).
Eigen::Matrix3d jacobian_fd(const EosParams& eos, TauE mix, const Fractions& r);

// Closed form on the identification line alpha = phi = xi. It does not depend on the
// common value and is singular.
Eigen::Matrix3d identification_jacobian(const EosParams& eos, TauE mix);

std::array<std::complex<double>, 3> eigenvalues(const Eigen::Matrix3d& J);

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_initial = 1e-3;
    double h_min = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 2'000'000;
    // Margin keeping fractions inside the open cube.
    double margin = 1e-12;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Fractions> states;
    std::vector<double> entropy;
    long rejected = 0;
    // Entropy decreases larger than 10 atol between accepted steps.
    long entropy_violations = 0;
    double max_entropy_drop = 0.0;
};

// TR-BDF2 (L-stable, second order, embedded third order estimate) with simplified Newton.
// Throws StepSizeUnderflow if the step falls below h_min.
Trajectory integrate(const EosParams& eos, TauE mix, const Fractions& r0, double t_final,
                     const IntegratorOptions& opts = {});

enum class EquilibriumKind { Saturation, Identification, NotConverged };
std::string to_string(EquilibriumKind k);

struct PhasicGaps {
    double p = 0.0;
    double T = 0.0;
    double mu = 0.0;
};

struct EquilibriumReport {
    EquilibriumKind kind = EquilibriumKind::NotConverged;
    // Last state of the trajectory.
    Fractions r_raw;
    // Equilibrium point: r_raw for identification, the Newton-refined zero of rhs for
    // saturation.
    Fractions r_final;
    double residual = 0.0;
    double raw_residual = 0.0;
    // Relative phasic gaps |a-b|/max(|a|,|b|).
    PhasicGaps gaps;
    PhasicGaps raw_gaps;
    std::array<std::complex<double>, 3> eigenvalues{};
};

inline constexpr double kIdentificationTol = 1e-4;
inline constexpr double kSaturationTol = 1e-5;

EquilibriumReport detect_equilibrium(const EosParams& eos, TauE mix, const Trajectory& traj);

PhasicGaps phasic_gaps(const EosParams& eos, TauE mix, const Fractions& r);

double lyapunov_GS(const DomeTable& dome, TauE mix, const Fractions& r);
double lyapunov_GI(const EosParams& eos, TauE mix, const Fractions& r);

// Uniform sample of (0,1)^3 restricted to fractions whose phasic states lie in D_s.
Fractions sample_fractions(const EosParams& eos, TauE mix, std::mt19937_64& rng);

void write_trajectory_csv(std::ostream& os, const EosParams& eos, TauE mix, const Trajectory& traj);

}  // namespace vdw
