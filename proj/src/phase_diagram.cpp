#include <vdw/phase_diagram.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

namespace vdw {

namespace {

constexpr int kNewtonMaxIter = 100;
constexpr double kSatTol = 1e-10;

template <class F>
std::pair<double, double> bracket_root(F f, double lo, double hi, int bits = 52) {
    boost::uintmax_t it = 200;
    return boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(bits), it);
}

template <class F>
double solve_root(F f, double lo, double hi) {
    const auto r = bracket_root(f, lo, hi);
    return 0.5 * (r.first + r.second);
}

double mu_on_isotherm(const EosParams& eos, double tau, double T) {
    return evaluate(eos, {tau, isotherm_energy(eos, tau, T)}).mu;
}

SaturationPair make_pair(const EosParams& eos, double tau1, double tau2, double T) {
    SaturationPair sp;
    sp.x1 = {tau1, isotherm_energy(eos, tau1, T)};
    sp.x2 = {tau2, isotherm_energy(eos, tau2, T)};
    const ThermoEval a = evaluate(eos, sp.x1);
    const ThermoEval b = evaluate(eos, sp.x2);
    sp.T_star = T;
    sp.p_star = 0.5 * (a.p + b.p);
    sp.mu_star = 0.5 * (a.mu + b.mu);
    return sp;
}

// Damped Newton on (p1 - p2, mu1 - mu2) = 0 keeping tau1 on the liquid and tau2 on the
// vapor side of the spinodal. Returns false if the iteration stalls.
bool saturation_newton(const EosParams& eos, double T, const SpinodalVolumes& sv, double& t1,
                       double& t2, std::vector<double>& trace) {
    auto residual = [&](double u, double v) -> std::array<double, 2> {
        return {isotherm_pressure(eos, u, T) - isotherm_pressure(eos, v, T),
                mu_on_isotherm(eos, u, T) - mu_on_isotherm(eos, v, T)};
    };
    auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };
    auto admissible = [&](double u, double v) {
        return u - eos.b > kDomainMargin && u < sv.tau_liquid && v > sv.tau_vapor;
    };
    if (!admissible(t1, t2)) return false;

    std::array<double, 2> r = residual(t1, t2);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
        const double nr = norm(r);
        trace.push_back(nr);
        if (nr <= kSatTol) return true;
        const double d1 = isotherm_pressure_slope(eos, t1, T);
        const double d2 = isotherm_pressure_slope(eos, t2, T);
        // J = [[d1, -d2], [t1 d1, -t2 d2]] since dmu/dtau = tau dp/dtau on an isotherm.
        const double det = d1 * d2 * (t1 - t2);
        if (det == 0.0 || !std::isfinite(det)) return false;
        const double s1 = (-t2 * d2 * -r[0] + d2 * -r[1]) / det;
        const double s2 = (-t1 * d1 * -r[0] + d1 * -r[1]) / det;
        double lambda = 1.0;
        bool moved = false;
        while (lambda > 1e-10) {
            const double u = t1 + lambda * s1;
            const double v = t2 + lambda * s2;
            if (admissible(u, v)) {
                const auto rn = residual(u, v);
                if (norm(rn) < (1.0 - 1e-4 * lambda) * nr) {
                    t1 = u;
                    t2 = v;
                    r = rn;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved) {
            trace.push_back(norm(r));
            return norm(r) <= kSatTol;
        }
    }
    trace.push_back(norm(r));
    return norm(r) <= kSatTol;
}

// Initial guess from a monotone 1D problem in the pressure.
std::pair<double, double> saturation_bracket_guess(const EosParams& eos, double T,
                                                   const SpinodalVolumes& sv) {
    const double p_hi = isotherm_pressure(eos, sv.tau_vapor, T);
    double p_lo = isotherm_pressure(eos, sv.tau_liquid, T);
    if (p_lo <= 0.0) p_lo = 1e-12 * p_hi;

    auto liquid_root = [&](double P) {
        const double lo = eos.b + 1e-14 * (sv.tau_liquid - eos.b) + kDomainMargin;
        return solve_root([&](double t) { return isotherm_pressure(eos, t, T) - P; }, lo,
                          sv.tau_liquid);
    };
    auto vapor_root = [&](double P) {
        double hi = 2.0 * sv.tau_vapor;
        while (isotherm_pressure(eos, hi, T) > P) hi *= 2.0;
        return solve_root([&](double t) { return isotherm_pressure(eos, t, T) - P; },
                          sv.tau_vapor, hi);
    };
    auto dmu = [&](double P) {
        return mu_on_isotherm(eos, liquid_root(P), T) - mu_on_isotherm(eos, vapor_root(P), T);
    };
    const double P = solve_root(dmu, p_lo, p_hi);
    return {liquid_root(P), vapor_root(P)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

std::string to_string(Zone z) {
    switch (z) {
        case Zone::Spinodal: return "Spinodal";
        case Zone::MetastableLiquid: return "MetastableLiquid";
        case Zone::MetastableVapor: return "MetastableVapor";
        case Zone::StableLiquid: return "StableLiquid";
        case Zone::StableVapor: return "StableVapor";
        case Zone::Supercritical: return "Supercritical";
    }
    return "?";
}

double spinodal_energy(const EosParams& eos, double tau) {
    if (!(tau - eos.b > kDomainMargin)) throw DomainError("spinodal_energy: tau <= b");
    const double d = tau - eos.b;
    return 2.0 * eos.a * eos.Cv * d * d / (eos.R * tau * tau * tau) - eos.a / tau;
}

SpinodalVolumes spinodal_volumes(const EosParams& eos, double T) {
    const CriticalPoint c = critical_point(eos);
    if (!(T > 0.0) || !(T < c.T)) {
        throw InvalidTemperature("temperature " + fmt(T) + " not in (0, Tc=" + fmt(c.T) + ")");
    }
    // Zeros of 2a(tau-b)^2 - R T tau^3.
    auto q = [&](double t) {
        const double d = t - eos.b;
        return 2.0 * eos.a * d * d - eos.R * T * t * t * t;
    };
    SpinodalVolumes sv;
    sv.tau_liquid = solve_root(q, eos.b, c.tau);
    double hi = 2.0 * c.tau;
    while (q(hi) > 0.0) hi *= 2.0;
    sv.tau_vapor = solve_root(q, c.tau, hi);
    return sv;
}

SaturationPair saturation_at_temperature(const EosParams& eos, double T,
                                         std::optional<std::pair<double, double>> guess) {
    const SpinodalVolumes sv = spinodal_volumes(eos, T);
    std::vector<double> trace;
    if (guess) {
        double t1 = guess->first, t2 = guess->second;
        if (saturation_newton(eos, T, sv, t1, t2, trace)) return make_pair(eos, t1, t2, T);
    }
    auto [t1, t2] = saturation_bracket_guess(eos, T, sv);
    if (saturation_newton(eos, T, sv, t1, t2, trace)) return make_pair(eos, t1, t2, T);
    throw NoConvergence("saturation solve failed at T=" + fmt(T), trace);
}

DomeTable DomeTable::build(const EosParams& eos, int n_samples, double T_min) {
    eos.validate();
    if (n_samples < 8) throw std::invalid_argument("dome table needs at least 8 samples");
    DomeTable d;
    d.eos_ = eos;
    d.crit_ = critical_point(eos);
    if (!(T_min > 0.0 && T_min < d.crit_.T)) {
        throw InvalidTemperature("T_min must lie in (0, Tc)");
    }
    const double span = d.crit_.T - T_min;
    std::optional<std::pair<double, double>> guess;
    d.rows_.reserve(static_cast<std::size_t>(n_samples) + 1);
    for (int k = n_samples; k >= 1; --k) {
        const double w = static_cast<double>(k) / n_samples;
        const double T = d.crit_.T - span * w * w;
        SaturationPair sp;
        try {
            sp = saturation_at_temperature(eos, T, guess);
        } catch (const NoConvergence& ex) {
            throw NoConvergence(std::string("dome row: ") + ex.what(), ex.residuals());
        }
        guess = std::make_pair(sp.x1.tau, sp.x2.tau);
        d.rows_.push_back(sp);
    }
    SaturationPair apex;
    apex.x1 = apex.x2 = {d.crit_.tau, d.crit_.e};
    apex.T_star = d.crit_.T;
    apex.p_star = d.crit_.p;
    apex.mu_star = evaluate(eos, apex.x1).mu;
    d.rows_.push_back(apex);

    std::vector<double> lt, le, vt, ve;
    for (const auto& r : d.rows_) {
        if (lt.empty() || r.x1.tau > lt.back()) {
            lt.push_back(r.x1.tau);
            le.push_back(r.x1.e);
        }
    }
    for (auto it = d.rows_.rbegin(); it != d.rows_.rend(); ++it) {
        if (vt.empty() || it->x2.tau > vt.back()) {
            vt.push_back(it->x2.tau);
            ve.push_back(it->x2.e);
        }
    }
    d.liq_lo_ = lt.front();
    d.vap_hi_ = vt.back();
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    d.liq_ = Pchip(std::move(lt), std::move(le));
    d.vap_ = Pchip(std::move(vt), std::move(ve));
    return d;
}

double DomeTable::branch_temperature(double tau, Side side) const {
    const double T_lo = 0.25 * crit_.T;
    const double T_hi = rows_.front().T_star;
    auto branch_tau = [&](double T) {
        const SaturationPair sp = saturation_at_temperature(eos_, T);
        return (side == Side::Liquid ? sp.x1.tau : sp.x2.tau) - tau;
    };
    const double f_lo = branch_tau(T_lo);
    const double f_hi = branch_tau(T_hi);
    if (f_lo * f_hi > 0.0) {
        throw DomainError("tau=" + fmt(tau) + " outside the saturation dome range");
    }
    return solve_root(branch_tau, T_lo, T_hi);
}

double DomeTable::g_star(double tau) const {
    if (!(tau - eos_.b > kDomainMargin)) throw DomainError("g_star: tau <= b");
    if (tau >= liq_lo_ && tau <= crit_.tau) return liq_(tau);
    if (tau >= crit_.tau && tau <= vap_hi_) return vap_(tau);
    const Side side = tau < crit_.tau ? Side::Liquid : Side::Vapor;
    const double T = branch_temperature(tau, side);
    return isotherm_energy(eos_, tau, T);
}

const SaturationPair& DomeTable::nearest(double T) const {
    return *std::min_element(rows_.begin(), rows_.end(), [&](const auto& u, const auto& v) {
        return std::abs(u.T_star - T) < std::abs(v.T_star - T);
    });
}

Zone classify(const DomeTable& dome, TauE x) {
    const EosParams& eos = dome.eos();
    check_domain(eos, x);
    if (x.e <= spinodal_energy(eos, x.tau)) return Zone::Spinodal;
    const CriticalPoint& c = dome.critical();
    const bool liquid = x.tau < c.tau;
    if (x.e >= isotherm_energy(eos, x.tau, c.T)) return Zone::Supercritical;
    if (x.e <= dome.g_star(x.tau)) return liquid ? Zone::MetastableLiquid : Zone::MetastableVapor;
    return liquid ? Zone::StableLiquid : Zone::StableVapor;
}

EquilibriumFractions equilibrium_fractions(const DomeTable& dome, TauE x) {
    const Zone z = classify(dome, x);
    if (!under_dome(z)) {
        throw NotUnderDome("state (" + fmt(x.tau) + ", " + fmt(x.e) + ") is " + to_string(z));
    }
    const EosParams& eos = dome.eos();
    // Liquid mass fraction from the volume and from the energy.
    auto lever = [&](const SaturationPair& sp) {
        const double ft = (sp.x2.tau - x.tau) / (sp.x2.tau - sp.x1.tau);
        const double fe = (sp.x2.e - x.e) / (sp.x2.e - sp.x1.e);
        return std::make_pair(ft, fe);
    };

    std::vector<std::pair<double, std::pair<double, double>>> grid;  // (T, guess)
    // Below the table, sample directly.
    const double T_first = dome.rows().front().T_star;
    for (int k = 0; k < 16; ++k) {
        const double T = 0.25 * dome.critical().T + (T_first - 0.25 * dome.critical().T) * k / 16.0;
        try {
            const SaturationPair sp = saturation_at_temperature(eos, T);
            grid.push_back({T, {sp.x1.tau, sp.x2.tau}});
        } catch (const NoConvergence&) {
        }
    }
    const auto& rows = dome.rows();
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        grid.push_back({rows[i].T_star, {rows[i].x1.tau, rows[i].x2.tau}});
    }

    auto h_at = [&](double T, std::pair<double, double> g) {
        const auto l = lever(saturation_at_temperature(eos, T, g));
        return l.first - l.second;
    };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const auto& [Ta, ga] = grid[i];
        const auto& [Tb, gb] = grid[i + 1];
        const double ha = h_at(Ta, ga);
        const double hb = h_at(Tb, gb);
        if (ha * hb > 0.0) continue;
        double T;
        if (ha == 0.0) {
            T = Ta;
        } else if (hb == 0.0) {
            T = Tb;
        } else {
            T = solve_root([&](double t) { return h_at(t, ga); }, Ta, Tb);
        }
        const SaturationPair sp = saturation_at_temperature(eos, T, ga);
        const auto [ft, fe] = lever(sp);
        const double phi = 0.5 * (ft + fe);
        if (phi < -1e-8 || phi > 1.0 + 1e-8) continue;
        EquilibriumFractions out;
        out.pair = sp;
        out.phi_liquid = std::clamp(phi, 0.0, 1.0);
        out.r_sharp = {out.phi_liquid * sp.x1.tau / x.tau, out.phi_liquid,
                       out.phi_liquid * sp.x1.e / x.e};
        out.r_star = out.r_sharp.complement();
        return out;
    }
    throw NotUnderDome("no saturation segment contains (" + fmt(x.tau) + ", " + fmt(x.e) + ")");
}

double concave_hull_entropy(const DomeTable& dome, TauE x) {
    const EosParams& eos = dome.eos();
    if (!under_dome(classify(dome, x))) return entropy(eos, x);
    const EquilibriumFractions ef = equilibrium_fractions(dome, x);
    return ef.phi_liquid * entropy(eos, ef.pair.x1) +
           (1.0 - ef.phi_liquid) * entropy(eos, ef.pair.x2);
}

TauE tangent_state(const EosParams& eos, TauE x, Side side) {
    const ThermoEval ex = evaluate(eos, x);
    const EntropyGradient gx = entropy_gradient(eos, x);
    const double target = ex.mu / ex.T;
    const CriticalPoint c = critical_point(eos);

    auto F = [&](TauE y) -> std::array<double, 2> {
        const ThermoEval ey = evaluate(eos, y);
        return {ey.s - ex.s - gx.p_over_T * (y.tau - x.tau) - gx.inv_T * (y.e - x.e),
                ey.mu / ey.T - target};
    };
    auto on_side = [&](TauE y) { return side == Side::Liquid ? y.tau < c.tau : y.tau > c.tau; };
    const double scale = 1.0 + std::hypot(x.tau, x.e);

    auto deflated_newton = [&](TauE y) -> std::optional<TauE> {
        for (int it = 0; it < 200; ++it) {
            const auto f = F(y);
            if (std::max(std::abs(f[0]), std::abs(f[1])) <= 1e-12) return y;
            const double dt = y.tau - x.tau, de = y.e - x.e;
            const double d2 = dt * dt + de * de;
            if (d2 < 1e-24) return std::nullopt;
            const double m = 1.0 / d2 + 1.0;
            const EntropyGradient gy = entropy_gradient(eos, y);
            const Hessian2 h = entropy_hessian(eos, y);
            // Row 2 is the gradient of mu/T: tau grad(p/T) + e grad(1/T).
            const double J[2][2] = {{gy.p_over_T - gx.p_over_T, gy.inv_T - gx.inv_T},
                                    {y.tau * h.s_tt + y.e * h.s_te, y.tau * h.s_te + y.e * h.s_ee}};
            const double gm[2] = {-2.0 * dt / (d2 * d2), -2.0 * de / (d2 * d2)};
            double G[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) G[i][j] = m * J[i][j] + f[i] * gm[j];
            const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
            if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
            const double r0 = -m * f[0], r1 = -m * f[1];
            const double st = (r0 * G[1][1] - G[0][1] * r1) / det;
            const double se = (G[0][0] * r1 - G[1][0] * r0) / det;
            const double g0 = m * std::hypot(f[0], f[1]);
            double lambda = 1.0;
            bool moved = false;
            while (lambda > 1e-8) {
                const TauE z{y.tau + lambda * st, y.e + lambda * se};
                if (in_domain(eos, z)) {
                    const auto fz = F(z);
                    const double zt = z.tau - x.tau, ze = z.e - x.e;
                    const double mz = 1.0 / (zt * zt + ze * ze) + 1.0;
                    if (mz * std::hypot(fz[0], fz[1]) < (1.0 - 1e-4 * lambda) * g0) {
                        y = z;
                        moved = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!moved) return std::nullopt;
        }
        return std::nullopt;
    };

    std::vector<TauE> starts;
    if (ex.T < c.T) {
        try {
            const SaturationPair sp = saturation_at_temperature(eos, ex.T);
            starts.push_back(side == Side::Liquid ? sp.x1 : sp.x2);
        } catch (const std::exception&) {
        }
    }
    for (int k = 0; k < 6; ++k) {
        double tau;
        if (side == Side::Liquid) {
            tau = eos.b + (c.tau - eos.b) * (0.1 + 0.16 * k);
        } else {
            tau = c.tau * 1.07 * std::pow(10.0 / 1.07, k / 5.0);
        }
        starts.push_back({tau, isotherm_energy(eos, tau, ex.T)});
    }
    for (const TauE& y0 : starts) {
        std::optional<TauE> y;
        try {
            y = deflated_newton(y0);
        } catch (const DomainError&) {
            continue;
        }
        if (y && on_side(*y) && std::hypot(y->tau - x.tau, y->e - x.e) > 1e-6 * scale) return *y;
    }
    throw NoDistinctRoot("no tangent state distinct from (" + fmt(x.tau) + ", " + fmt(x.e) +
                         ") on the requested side");
}

}  // namespace vdw
