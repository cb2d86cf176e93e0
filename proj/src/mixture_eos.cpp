#include <vdw/mixture_eos.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include <vdw/relax_dynamics.hpp>

namespace vdw {

namespace {

struct Phases {
    PhasicDecomposition d;
    ThermoEval a, b;
};

Phases phases(const EosParams& eos, TauE mix, const Fractions& r) {
    Phases ph{phasic_from_fractions(eos, mix, r), {}, {}};
    ph.a = evaluate(eos, ph.d.x1);
    ph.b = evaluate(eos, ph.d.x2);
    return ph;
}

double quad(const Hessian2& h, double u, double v) {
    return h.s_tt * u * u + 2.0 * h.s_te * u * v + h.s_ee * v * v;
}

}  // namespace

double mixture_temperature(const EosParams& eos, TauE mix, const Fractions& r) {
    const Phases ph = phases(eos, mix, r);
    return 1.0 / (r.xi / ph.a.T + (1.0 - r.xi) / ph.b.T);
}

double mixture_pressure(const EosParams& eos, TauE mix, const Fractions& r) {
    const Phases ph = phases(eos, mix, r);
    const double T = 1.0 / (r.xi / ph.a.T + (1.0 - r.xi) / ph.b.T);
    return T * (r.alpha * ph.a.p / ph.a.T + (1.0 - r.alpha) * ph.b.p / ph.b.T);
}

MixtureEval evaluate_mixture(const EosParams& eos, TauE mix, const Fractions& r) {
    const Phases ph = phases(eos, mix, r);
    MixtureEval m;
    m.T_mix = 1.0 / (r.xi / ph.a.T + (1.0 - r.xi) / ph.b.T);
    m.p_mix = m.T_mix * (r.alpha * ph.a.p / ph.a.T + (1.0 - r.alpha) * ph.b.p / ph.b.T);
    const Hessian2 h1 = entropy_hessian(eos, ph.d.x1);
    const Hessian2 h2 = entropy_hessian(eos, ph.d.x2);
    const double q1 = quad(h1, -r.alpha, r.xi * m.p_mix) / r.phi;
    const double q2 = quad(h2, -(1.0 - r.alpha), (1.0 - r.xi) * m.p_mix) / (1.0 - r.phi);
    m.c2 = -m.T_mix * mix.tau * mix.tau * (q1 + q2);
    return m;
}

double sound_speed_sq(const EosParams& eos, TauE mix, const Fractions& r) {
    return evaluate_mixture(eos, mix, r).c2;
}

double mixture_pressure_de(const EosParams& eos, TauE mix, const Fractions& r) {
    const Phases ph = phases(eos, mix, r);
    const Hessian2 h1 = entropy_hessian(eos, ph.d.x1);
    const Hessian2 h2 = entropy_hessian(eos, ph.d.x2);
    const double P = r.alpha * ph.a.p / ph.a.T + (1.0 - r.alpha) * ph.b.p / ph.b.T;
    const double Q = r.xi / ph.a.T + (1.0 - r.xi) / ph.b.T;
    const double S_te = r.alpha * h1.s_te * r.xi / r.phi +
                        (1.0 - r.alpha) * h2.s_te * (1.0 - r.xi) / (1.0 - r.phi);
    const double S_ee = r.xi * r.xi * h1.s_ee / r.phi +
                        (1.0 - r.xi) * (1.0 - r.xi) * h2.s_ee / (1.0 - r.phi);
    return (S_te * Q - P * S_ee) / (Q * Q);
}

double energy_from_pressure(const EosParams& eos, double tau, double p, const Fractions& r,
                            std::optional<double> guess) {
    double e;
    if (guess) {
        e = *guess;
    } else {
        const double T = (p + eos.a / (tau * tau)) * (tau - eos.b) / eos.R;
        e = isotherm_energy(eos, tau, std::max(T, 1e-8));
    }
    const double scale = std::max(1.0, std::abs(p));
    std::vector<double> trace;
    auto residual = [&](double ee) { return mixture_pressure(eos, {tau, ee}, r) - p; };
    const double tau1 = r.alpha * tau / r.phi, tau2 = (1 - r.alpha) * tau / (1 - r.phi);
    if (!(tau1 - eos.b > kDomainMargin && tau2 - eos.b > kDomainMargin)) {
        throw PhasicOutOfDomain(tau1 - eos.b > kDomainMargin ? 2 : 1,
                                "phasic volume out of range in pressure inversion");
    }
    // The single-phase guess can put a phasic energy below -a/tau_k; raise it until valid.
    double f = 0.0;
    for (int k = 0;; ++k) {
        try {
            f = residual(e);
            break;
        } catch (const DomainError&) {
            if (k == 60) throw NoConvergence("no admissible starting energy");
            e += std::max(1.0, std::abs(e));
        }
    }
    for (int it = 0; it < 100; ++it) {
        trace.push_back(std::abs(f));
        if (std::abs(f) <= 1e-12 * scale) return e;
        const double dp = mixture_pressure_de(eos, {tau, e}, r);
        if (!(dp != 0.0) || !std::isfinite(dp)) break;
        const double step = -f / dp;
        double lambda = 1.0;
        bool moved = false;
        while (lambda > 1e-12) {
            const double en = e + lambda * step;
            try {
                const double fn = residual(en);
                if (std::abs(fn) < std::abs(f)) {
                    e = en;
                    f = fn;
                    moved = true;
                    break;
                }
            } catch (const DomainError&) {
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }
    trace.push_back(std::abs(f));
    if (std::abs(f) <= 1e-10 * scale) return e;
    std::ostringstream os;
    os << "pressure inversion failed for tau=" << tau << " p=" << p;
    throw NoConvergence(os.str(), trace);
}

}  // namespace vdw
