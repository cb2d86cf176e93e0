#include <vdw/thermo.hpp>

#include <cmath>
#include <sstream>

namespace vdw {

namespace {

std::string describe(TauE x) {
    std::ostringstream os;
    os.precision(17);
    os << "(tau=" << x.tau << ", e=" << x.e << ")";
    return os.str();
}

void check_tau(const EosParams& eos, double tau) {
    if (!(tau - eos.b > kDomainMargin)) {
        std::ostringstream os;
        os.precision(17);
        os << "specific volume " << tau << " not above covolume " << eos.b;
        throw DomainError(os.str());
    }
}

}  // namespace

void EosParams::validate() const {
    if (!(a > 0.0 && b > 0.0 && R > 0.0 && Cv > 0.0) || !std::isfinite(s0)) {
        throw std::invalid_argument("EoS parameters a, b, R, Cv must be positive");
    }
}

bool in_domain(const EosParams& eos, TauE x) noexcept {
    return x.tau - eos.b > kDomainMargin && eos.a / x.tau + x.e > kDomainMargin &&
           std::isfinite(x.e);
}

void check_domain(const EosParams& eos, TauE x) {
    if (!in_domain(eos, x)) {
        throw DomainError("state " + describe(x) + " outside the entropy domain");
    }
}

double entropy(const EosParams& eos, TauE x) {
    check_domain(eos, x);
    return eos.Cv * std::log(eos.a / x.tau + x.e) + eos.R * std::log(x.tau - eos.b) + eos.s0;
}

double temperature(const EosParams& eos, TauE x) {
    check_domain(eos, x);
    return (x.e + eos.a / x.tau) / eos.Cv;
}

double pressure(const EosParams& eos, TauE x) {
    const double T = temperature(eos, x);
    return eos.R * T / (x.tau - eos.b) - eos.a / (x.tau * x.tau);
}

double chemical_potential(const EosParams& eos, TauE x) {
    return evaluate(eos, x).mu;
}

ThermoEval evaluate(const EosParams& eos, TauE x) {
    ThermoEval out;
    out.s = entropy(eos, x);
    out.T = (x.e + eos.a / x.tau) / eos.Cv;
    out.p = eos.R * out.T / (x.tau - eos.b) - eos.a / (x.tau * x.tau);
    // Gibbs identity T s = -mu + p tau + e.
    out.mu = out.p * x.tau + x.e - out.T * out.s;
    return out;
}

EntropyGradient entropy_gradient(const EosParams& eos, TauE x) {
    const double T = temperature(eos, x);
    return {eos.R / (x.tau - eos.b) - eos.a / (x.tau * x.tau * T), 1.0 / T};
}

Hessian2 entropy_hessian(const EosParams& eos, TauE x) {
    const double T = temperature(eos, x);
    const double tau = x.tau;
    const double tau2 = tau * tau;
    const double dtb = tau - eos.b;
    Hessian2 h;
    h.s_tt = 2.0 * eos.a / (tau2 * tau * T) - eos.a * eos.a / (eos.Cv * tau2 * tau2 * T * T) -
             eos.R / (dtb * dtb);
    h.s_te = eos.a / (eos.Cv * tau2 * T * T);
    h.s_ee = -1.0 / (eos.Cv * T * T);
    return h;
}

double isotherm_pressure(const EosParams& eos, double tau, double T) {
    check_tau(eos, tau);
    if (!(T > 0.0)) throw DomainError("isotherm temperature must be positive");
    return eos.R * T / (tau - eos.b) - eos.a / (tau * tau);
}

double isotherm_energy(const EosParams& eos, double tau, double T) {
    check_tau(eos, tau);
    if (!(T > 0.0)) throw DomainError("isotherm temperature must be positive");
    return eos.Cv * T - eos.a / tau;
}

double isotherm_pressure_slope(const EosParams& eos, double tau, double T) {
    check_tau(eos, tau);
    const double dtb = tau - eos.b;
    return -eos.R * T / (dtb * dtb) + 2.0 * eos.a / (tau * tau * tau);
}

double relative_entropy(const EosParams& eos, TauE x, TauE y) {
    const double sx = entropy(eos, x);
    const double sy = entropy(eos, y);
    const EntropyGradient g = entropy_gradient(eos, y);
    return sx - sy - g.p_over_T * (x.tau - y.tau) - g.inv_T * (x.e - y.e);
}

CriticalPoint critical_point(const EosParams& eos) {
    eos.validate();
    // dp/dtau = d2p/dtau2 = 0 on an isotherm: tau_c = 3b, R T_c = 2a (tau_c - b)^2 / tau_c^3.
    CriticalPoint c;
    c.tau = 3.0 * eos.b;
    const double dtb = c.tau - eos.b;
    c.T = 2.0 * eos.a * dtb * dtb / (eos.R * c.tau * c.tau * c.tau);
    c.e = eos.Cv * c.T - eos.a / c.tau;
    c.p = eos.R * c.T / dtb - eos.a / (c.tau * c.tau);
    return c;
}

}  // namespace vdw
