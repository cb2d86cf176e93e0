#include <vdw/relax_dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <vdw/csv.hpp>

namespace vdw {

namespace {

Eigen::Vector3d to_vec(const Fractions& r) { return {r.alpha, r.phi, r.xi}; }
Fractions to_fr(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

std::string describe(const Fractions& r) {
    std::ostringstream os;
    os.precision(12);
    os << "(" << r.alpha << ", " << r.phi << ", " << r.xi << ")";
    return os.str();
}

double rel_gap(double a, double b) {
    const double d = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / d;
}

struct PhaseData {
    ThermoEval ev;
    EntropyGradient g;
    Hessian2 h;
};

PhaseData phase_data(const EosParams& eos, TauE x) {
    return {evaluate(eos, x), entropy_gradient(eos, x), entropy_hessian(eos, x)};
}

}  // namespace

PhasicDecomposition phasic_from_fractions(const EosParams& eos, TauE mix, const Fractions& r) {
    if (!r.in_open_cube()) {
        throw FractionOutOfRange("fractions " + describe(r) + " not in (0,1)^3");
    }
    PhasicDecomposition d;
    d.phi = r.phi;
    d.x1 = {r.alpha * mix.tau / r.phi, r.xi * mix.e / r.phi};
    d.x2 = {(1.0 - r.alpha) * mix.tau / (1.0 - r.phi), (1.0 - r.xi) * mix.e / (1.0 - r.phi)};
    if (!in_domain(eos, d.x1)) {
        throw PhasicOutOfDomain(1, "phase 1 outside D_s for fractions " + describe(r));
    }
    if (!in_domain(eos, d.x2)) {
        throw PhasicOutOfDomain(2, "phase 2 outside D_s for fractions " + describe(r));
    }
    return d;
}

double mixture_entropy(const EosParams& eos, TauE mix, const Fractions& r) {
    const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
    return d.phi * entropy(eos, d.x1) + (1.0 - d.phi) * entropy(eos, d.x2);
}

Eigen::Vector3d mixture_entropy_gradient(const EosParams& eos, TauE mix, const Fractions& r) {
    const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
    const ThermoEval a = evaluate(eos, d.x1);
    const ThermoEval b = evaluate(eos, d.x2);
    return {mix.tau * (a.p / a.T - b.p / b.T), b.mu / b.T - a.mu / a.T,
            mix.e * (1.0 / a.T - 1.0 / b.T)};
}

Eigen::Vector3d rhs(const EosParams& eos, TauE mix, const Fractions& r) {
    const Eigen::Vector3d g = mixture_entropy_gradient(eos, mix, r);
    return {r.alpha * (1.0 - r.alpha) * g[0], r.phi * (1.0 - r.phi) * g[1],
            r.xi * (1.0 - r.xi) * g[2]};
}

Eigen::Matrix3d jacobian(const EosParams& eos, TauE mix, const Fractions& r) {
    const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
    const PhaseData p1 = phase_data(eos, d.x1);
    const PhaseData p2 = phase_data(eos, d.x2);
    const double tau = mix.tau, e = mix.e, phi = r.phi, psi = 1.0 - r.phi;

    // Derivatives of the phasic (tau_k, e_k) with respect to (alpha, phi, xi).
    Eigen::Matrix<double, 2, 3> dx1, dx2;
    dx1 << tau / phi, -d.x1.tau / phi, 0.0, 0.0, -d.x1.e / phi, e / phi;
    dx2 << -tau / psi, d.x2.tau / psi, 0.0, 0.0, d.x2.e / psi, -e / psi;

    auto hess = [](const Hessian2& h) {
        Eigen::Matrix2d m;
        m << h.s_tt, h.s_te, h.s_te, h.s_ee;
        return m;
    };
    // d(p/T, 1/T) and d(mu/T) = tau d(p/T) + e d(1/T).
    const Eigen::Matrix<double, 2, 3> dw1 = hess(p1.h) * dx1;
    const Eigen::Matrix<double, 2, 3> dw2 = hess(p2.h) * dx2;
    const Eigen::RowVector3d dm1 = d.x1.tau * dw1.row(0) + d.x1.e * dw1.row(1);
    const Eigen::RowVector3d dm2 = d.x2.tau * dw2.row(0) + d.x2.e * dw2.row(1);

    Eigen::Matrix3d dD;
    dD.row(0) = tau * (dw1.row(0) - dw2.row(0));
    dD.row(1) = dm2 - dm1;
    dD.row(2) = e * (dw1.row(1) - dw2.row(1));

    const Eigen::Vector3d D{tau * (p1.g.p_over_T - p2.g.p_over_T),
                            p2.ev.mu / p2.ev.T - p1.ev.mu / p1.ev.T,
                            e * (p1.g.inv_T - p2.g.inv_T)};
    const Eigen::Vector3d rv = to_vec(r);
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i) {
        J.row(i) = rv[i] * (1.0 - rv[i]) * dD.row(i);
        J(i, i) += (1.0 - 2.0 * rv[i]) * D[i];
    }
    return J;
}

Eigen::Matrix3d jacobian_fd(const EosParams& eos, TauE mix, const Fractions& r) {
    Eigen::Matrix3d J;
    const Eigen::Vector3d v = to_vec(r);
    for (int j = 0; j < 3; ++j) {
        const double h = 1e-6 * std::max(1e-3, std::abs(v[j]));
        auto at = [&](double k) {
            Eigen::Vector3d w = v;
            w[j] += k * h;
            return rhs(eos, mix, to_fr(w));
        };
        J.col(j) = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
    }
    return J;
}

Eigen::Matrix3d identification_jacobian(const EosParams& eos, TauE mix) {
    const Hessian2 h = entropy_hessian(eos, mix);
    const double t = mix.tau, e = mix.e;
    const double a11 = t * t * h.s_tt, a13 = t * e * h.s_te;
    const double a31 = t * e * h.s_te, a33 = e * e * h.s_ee;
    Eigen::Matrix3d J;
    J << a11, -(a11 + a13), a13,
         -(a11 + a31), a11 + a13 + a31 + a33, -(a13 + a33),
         a31, -(a31 + a33), a33;
    return J;
}

std::array<std::complex<double>, 3> eigenvalues(const Eigen::Matrix3d& J) {
    Eigen::EigenSolver<Eigen::Matrix3d> es(J, false);
    std::array<std::complex<double>, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = es.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](auto u, auto v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    return out;
}

Trajectory integrate(const EosParams& eos, TauE mix, const Fractions& r0, double t_final,
                     const IntegratorOptions& opts) {
    // TR-BDF2 written as a three stage ESDIRK.
    const double gamma = 2.0 - std::sqrt(2.0);
    const double d = 0.5 * gamma;
    const double w = std::sqrt(2.0) / 4.0;
    const double bh[3] = {(1.0 - w) / 3.0, (3.0 * w + 1.0) / 3.0, d / 3.0};
    const double bw[3] = {w, w, d};

    Trajectory tr;
    Eigen::Vector3d y = to_vec(r0);
    double t = 0.0;
    double S = mixture_entropy(eos, mix, r0);
    tr.times.push_back(t);
    tr.states.push_back(r0);
    tr.entropy.push_back(S);
    if (!(t_final > 0.0)) return tr;

    auto f = [&](const Eigen::Vector3d& v) {
        const Fractions fr = to_fr(v);
        if (!fr.inside(opts.margin)) {
            throw FractionOutOfRange("stage outside the fraction cube");
        }
        return rhs(eos, mix, fr);
    };
    auto weights = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return (opts.atol + opts.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
    };

    double h = std::min({opts.h_initial, t_final, opts.h_max});
    Eigen::Vector3d k1 = f(y);
    long steps = 0;
    while (t < t_final) {
        if (++steps > opts.max_steps) throw StepSizeUnderflow("too many steps", t);
        if (h < opts.h_min) throw StepSizeUnderflow("step size underflow", t);
        h = std::min(h, t_final - t);

        const Eigen::Matrix3d J = jacobian(eos, mix, to_fr(y));
        const Eigen::PartialPivLU<Eigen::Matrix3d> lu(Eigen::Matrix3d::Identity() - h * d * J);

        // Solve Y - h d f(Y) = base for an implicit stage.
        auto stage = [&](const Eigen::Vector3d& base, Eigen::Vector3d Y, Eigen::Vector3d& kY) {
            const Eigen::Vector3d sc = weights(y, y);
            for (int it = 0; it < 10; ++it) {
                kY = f(Y);
                const Eigen::Vector3d G = Y - h * d * kY - base;
                const Eigen::Vector3d dY = lu.solve(-G);
                Y += dY;
                if ((dY.array() / sc.array()).abs().maxCoeff() < 1e-2) {
                    kY = f(Y);
                    return Y;
                }
            }
            throw NoConvergence("stage iteration");
        };

        bool ok = true;
        Eigen::Vector3d y_new, k2, k3;
        try {
            const Eigen::Vector3d Y2 = stage(y + h * d * k1, y + gamma * h * k1, k2);
            const Eigen::Vector3d base3 = y + h * w * (k1 + k2);
            y_new = stage(base3, Y2 + (Y2 - y) * ((1.0 - gamma) / gamma), k3);
            phasic_from_fractions(eos, mix, to_fr(y_new));
        } catch (const std::domain_error&) {
            ok = false;
        } catch (const NoConvergence&) {
            ok = false;
        }
        if (!ok) {
            ++tr.rejected;
            h *= 0.5;
            continue;
        }

        const Eigen::Vector3d err =
            h * ((bw[0] - bh[0]) * k1 + (bw[1] - bh[1]) * k2 + (bw[2] - bh[2]) * k3);
        const double en = (err.array() / weights(y, y_new).array()).abs().maxCoeff();
        if (en > 1.0) {
            ++tr.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 3.0));
            continue;
        }
        t += h;
        y = y_new;
        k1 = k3;
        const double S_new = mixture_entropy(eos, mix, to_fr(y));
        const double drop = S - S_new;
        if (drop > tr.max_entropy_drop) tr.max_entropy_drop = drop;
        if (drop > 10.0 * opts.atol) ++tr.entropy_violations;
        S = S_new;
        tr.times.push_back(t);
        tr.states.push_back(to_fr(y));
        tr.entropy.push_back(S);
        const double grow = en > 0.0 ? 0.9 * std::pow(en, -1.0 / 3.0) : 5.0;
        h = std::min(opts.h_max, h * std::clamp(grow, 0.2, 5.0));
    }
    return tr;
}

std::string to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Saturation: return "Saturation";
        case EquilibriumKind::Identification: return "Identification";
        case EquilibriumKind::NotConverged: return "NotConverged";
    }
    return "?";
}

PhasicGaps phasic_gaps(const EosParams& eos, TauE mix, const Fractions& r) {
    const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
    const ThermoEval a = evaluate(eos, d.x1);
    const ThermoEval b = evaluate(eos, d.x2);
    return {rel_gap(a.p, b.p), rel_gap(a.T, b.T), rel_gap(a.mu, b.mu)};
}

EquilibriumReport detect_equilibrium(const EosParams& eos, TauE mix, const Trajectory& traj) {
    EquilibriumReport rep;
    rep.r_raw = traj.states.back();
    rep.r_final = rep.r_raw;
    rep.raw_residual = rhs(eos, mix, rep.r_raw).norm();
    rep.residual = rep.raw_residual;
    rep.raw_gaps = rep.gaps = phasic_gaps(eos, mix, rep.r_raw);

    if (rep.r_raw.spread() <= kIdentificationTol) {
        rep.kind = EquilibriumKind::Identification;
        rep.eigenvalues = eigenvalues(jacobian(eos, mix, rep.r_raw));
        return rep;
    }

    // Refine the zero of rhs that the trajectory is approaching.
    Eigen::Vector3d r = to_vec(rep.r_raw);
    bool converged = false;
    try {
        for (int it = 0; it < 50; ++it) {
            const Eigen::Vector3d F = rhs(eos, mix, to_fr(r));
            const Eigen::Vector3d step = jacobian(eos, mix, to_fr(r)).partialPivLu().solve(-F);
            r += step;
            if (step.cwiseAbs().maxCoeff() <= 1e-14) {
                converged = true;
                break;
            }
        }
        converged = converged || rhs(eos, mix, to_fr(r)).norm() <= 1e-13;
    } catch (const std::domain_error&) {
        converged = false;
    }

    rep.eigenvalues = eigenvalues(jacobian(eos, mix, rep.r_raw));
    if (!converged) return rep;
    const Fractions rp = to_fr(r);
    if (max_abs_diff(rp, rep.r_raw) > 0.05 || rp.spread() <= kIdentificationTol) return rep;
    const PhasicGaps g = phasic_gaps(eos, mix, rp);
    const auto ev = eigenvalues(jacobian(eos, mix, rp));
    const bool attracting = std::all_of(ev.begin(), ev.end(), [](auto z) { return z.real() < 0.0; });
    if (g.p <= kSaturationTol && g.T <= kSaturationTol && g.mu <= kSaturationTol && attracting) {
        rep.kind = EquilibriumKind::Saturation;
        rep.r_final = rp;
        rep.gaps = g;
        rep.residual = rhs(eos, mix, rp).norm();
        rep.eigenvalues = ev;
    }
    return rep;
}

double lyapunov_GS(const DomeTable& dome, TauE mix, const Fractions& r) {
    return -mixture_entropy(dome.eos(), mix, r) + concave_hull_entropy(dome, mix);
}

double lyapunov_GI(const EosParams& eos, TauE mix, const Fractions& r) {
    return -mixture_entropy(eos, mix, r) + entropy(eos, mix);
}

Fractions sample_fractions(const EosParams& eos, TauE mix, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int tries = 0; tries < 100000; ++tries) {
        const Fractions r{U(rng), U(rng), U(rng)};
        if (!r.inside(1e-6)) continue;
        const TauE x1{r.alpha * mix.tau / r.phi, r.xi * mix.e / r.phi};
        const TauE x2{(1 - r.alpha) * mix.tau / (1 - r.phi), (1 - r.xi) * mix.e / (1 - r.phi)};
        if (in_domain(eos, x1) && in_domain(eos, x2)) return r;
    }
    throw DomainError("no admissible fractions found for this mixture state");
}

void write_trajectory_csv(std::ostream& os, const EosParams& eos, TauE mix, const Trajectory& traj) {
    write_eos_comment(os, eos);
    os << "# mix tau=" << mix.tau << " e=" << mix.e << '\n';
    os << "t,alpha,phi,xi,tau1,e1,tau2,e2,p1,p2,T1,T2,mu1,mu2,S_mix\n";
    const auto prec = os.precision(12);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const Fractions& r = traj.states[i];
        const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
        const ThermoEval a = evaluate(eos, d.x1);
        const ThermoEval b = evaluate(eos, d.x2);
        os << traj.times[i] << ',' << r.alpha << ',' << r.phi << ',' << r.xi << ',' << d.x1.tau
           << ',' << d.x1.e << ',' << d.x2.tau << ',' << d.x2.e << ',' << a.p << ',' << b.p << ','
           << a.T << ',' << b.T << ',' << a.mu << ',' << b.mu << ',' << traj.entropy[i] << '\n';
    }
    os.precision(prec);
}

}  // namespace vdw
