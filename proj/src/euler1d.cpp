#include <vdw/euler1d.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <vdw/csv.hpp>
#include <vdw/relax_dynamics.hpp>

namespace vdw {

Conserved& Conserved::operator+=(const Conserved& o) {
    ra += o.ra;
    rf += o.rf;
    rx += o.rx;
    rho += o.rho;
    mom += o.mom;
    ene += o.ene;
    return *this;
}

Conserved& Conserved::operator*=(double k) {
    ra *= k;
    rf *= k;
    rx *= k;
    rho *= k;
    mom *= k;
    ene *= k;
    return *this;
}

Conserved operator+(Conserved a, const Conserved& b) { return a += b; }
Conserved operator-(Conserved a, const Conserved& b) { return a += (-1.0) * b; }
Conserved operator*(double k, Conserved a) { return a *= k; }

namespace {

constexpr double kClamp = 1e-12;

struct Face {
    Primitive w;
    double c = 0.0;
    Conserved U;
};

Face face_state(const EosParams& eos, const Conserved& U) {
    Face f;
    f.U = U;
    f.w = cons_to_prim(eos, U);
    const double c2 = sound_speed_sq(eos, {1.0 / f.w.rho, f.w.e}, f.w.r);
    if (!(c2 > 0.0)) {
        std::ostringstream os;
        os << "non-positive sound speed squared " << c2;
        throw NonHyperbolicState(os.str());
    }
    f.c = std::sqrt(c2);
    return f;
}

Conserved flux_of(const Face& f) {
    const double u = f.w.u;
    const Conserved& U = f.U;
    return {U.ra * u, U.rf * u, U.rx * u, U.mom, U.mom * u + f.w.p, (U.ene + f.w.p) * u};
}

std::string at_cell(std::ptrdiff_t i) { return " in cell " + std::to_string(i); }

}  // namespace

Conserved prim_to_cons(const EosParams& eos, Primitive w) {
    if (!(w.rho > 0.0)) throw NonPositiveDensity("density must be positive");
    if (!w.r.in_open_cube()) {
        throw FractionOutOfRange("fractions must lie in (0,1)");
    }
    const double tau = 1.0 / w.rho;
    const double e = energy_from_pressure(eos, tau, w.p, w.r);
    return {w.rho * w.r.alpha, w.rho * w.r.phi, w.rho * w.r.xi, w.rho, w.rho * w.u,
            w.rho * (e + 0.5 * w.u * w.u)};
}

Primitive cons_to_prim(const EosParams& eos, const Conserved& U) {
    if (!(U.rho > 0.0)) throw NonPositiveDensity("density must be positive");
    Primitive w;
    w.rho = U.rho;
    w.u = U.mom / U.rho;
    w.r = {U.ra / U.rho, U.rf / U.rho, U.rx / U.rho};
    if (!w.r.in_open_cube()) {
        throw FractionOutOfRange("fractions out of (0,1)");
    }
    w.e = U.ene / U.rho - 0.5 * w.u * w.u;
    w.p = mixture_pressure(eos, {1.0 / w.rho, w.e}, w.r);
    return w;
}

Conserved physical_flux(const EosParams& eos, const Conserved& U) {
    Face f;
    f.U = U;
    f.w = cons_to_prim(eos, U);
    return flux_of(f);
}

Conserved hllc_flux(const EosParams& eos, const Conserved& L, const Conserved& R) {
    const Face fl = face_state(eos, L);
    const Face fr = face_state(eos, R);
    const double uL = fl.w.u, uR = fr.w.u, rL = fl.w.rho, rR = fr.w.rho;
    const double pL = fl.w.p, pR = fr.w.p;
    const double SL = std::min(uL - fl.c, uR - fr.c);
    const double SR = std::max(uL + fl.c, uR + fr.c);
    if (SL >= 0.0) return flux_of(fl);
    if (SR <= 0.0) return flux_of(fr);
    const double Ss = (pR - pL + rL * uL * (SL - uL) - rR * uR * (SR - uR)) /
                      (rL * (SL - uL) - rR * (SR - uR));

    auto star = [&](const Face& f, double S) {
        const double k = f.w.rho * (S - f.w.u) / (S - Ss);
        const double E = f.U.ene / f.w.rho;
        return Conserved{k * f.w.r.alpha, k * f.w.r.phi, k * f.w.r.xi, k, k * Ss,
                         k * (E + (Ss - f.w.u) * (Ss + f.w.p / (f.w.rho * (S - f.w.u))))};
    };
    if (Ss >= 0.0) return flux_of(fl) + SL * (star(fl, SL) - L);
    return flux_of(fr) + SR * (star(fr, SR) - R);
}

void SolverConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
}

double stable_dt(const EosParams& eos, const Grid1D& grid, const std::vector<Conserved>& U,
                 double cfl) {
    double smax = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        try {
            const Face f = face_state(eos, U[i]);
            smax = std::max(smax, std::abs(f.w.u) + f.c);
        } catch (const NonHyperbolicState& ex) {
            throw NonHyperbolicState(ex.what() + at_cell(i), static_cast<std::ptrdiff_t>(i));
        }
    }
    return cfl * grid.dx() / smax;
}

std::vector<Conserved> convective_step(const EosParams& eos, const Grid1D& grid,
                                       const std::vector<Conserved>& U, double dt,
                                       Boundary boundary, Conserved* inflow) {
    const int n = static_cast<int>(U.size());
    const int g = Grid1D::kGhosts;
    std::vector<Conserved> ext(static_cast<std::size_t>(n + 2 * g));
    for (int i = 0; i < n; ++i) ext[i + g] = U[i];
    for (int k = 0; k < g; ++k) {
        if (boundary == Boundary::Periodic) {
            ext[k] = U[n - g + k];
            ext[n + g + k] = U[k];
        } else {
            ext[k] = U[0];
            ext[n + g + k] = U[n - 1];
        }
    }
    // Interface j sits between ext[g-1+j] and ext[g+j].
    std::vector<Conserved> F(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        try {
            F[j] = hllc_flux(eos, ext[g - 1 + j], ext[g + j]);
        } catch (const NonHyperbolicState& ex) {
            const int cell = std::clamp(j, 0, n - 1);
            throw NonHyperbolicState(ex.what() + at_cell(cell), cell);
        }
    }
    const double k = dt / grid.dx();
    std::vector<Conserved> out(U);
    for (int i = 0; i < n; ++i) out[i] += (-k) * (F[i + 1] - F[i]);
    if (inflow) *inflow = k * (F[0] - F[n]);
    return out;
}

namespace {

Eigen::Vector3d vec(const Fractions& r) { return {r.alpha, r.phi, r.xi}; }
Fractions frac(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

// One RK4 step; throws on leaving the domain.
Eigen::Vector3d rk4(const EosParams& eos, TauE mix, const Eigen::Vector3d& y, double h,
                    double eps) {
    auto f = [&](const Eigen::Vector3d& v) { return rhs(eos, mix, frac(v)) / eps; };
    const Eigen::Vector3d k1 = f(y);
    const Eigen::Vector3d k2 = f(y + 0.5 * h * k1);
    const Eigen::Vector3d k3 = f(y + 0.5 * h * k2);
    const Eigen::Vector3d k4 = f(y + h * k3);
    const Eigen::Vector3d out = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!frac(out).in_open_cube()) throw FractionOutOfRange("RK4 step left the fraction cube");
    return out;
}

Eigen::Vector3d relax_cell(const EosParams& eos, TauE mix, Eigen::Vector3d y, double dt,
                           double eps) {
    const double h_max = eps / 10.0;
    double t = 0.0;
    double h = std::min(h_max, dt);
    int halvings = 0;
    while (t < dt) {
        h = std::min(h, dt - t);
        try {
            y = rk4(eos, mix, y, h, eps);
            t += h;
            for (int i = 0; i < 3; ++i) y[i] = std::clamp(y[i], kClamp, 1.0 - kClamp);
            if (halvings > 0) {
                h = std::min(h_max, 2.0 * h);
                --halvings;
            }
        } catch (const std::domain_error&) {
            if (++halvings > 40) throw;
            h *= 0.5;
        }
    }
    return y;
}

}  // namespace

std::vector<Conserved> source_step(const EosParams& eos, const std::vector<Conserved>& U,
                                   double dt, double epsilon) {
    std::vector<Conserved> out(U);
    for (std::size_t i = 0; i < U.size(); ++i) {
        const Conserved& c = U[i];
        const TauE mix{1.0 / c.rho, c.ene / c.rho - 0.5 * (c.mom / c.rho) * (c.mom / c.rho)};
        const Fractions r{c.ra / c.rho, c.rf / c.rho, c.rx / c.rho};
        try {
            const Eigen::Vector3d y = relax_cell(eos, mix, vec(r), dt, epsilon);
            out[i].ra = c.rho * y[0];
            out[i].rf = c.rho * y[1];
            out[i].rx = c.rho * y[2];
        } catch (const PhasicOutOfDomain& ex) {
            throw PhasicOutOfDomain(ex.phase(), ex.what() + at_cell(static_cast<std::ptrdiff_t>(i)));
        } catch (const std::domain_error& ex) {
            throw PhasicOutOfDomain(0, ex.what() + at_cell(static_cast<std::ptrdiff_t>(i)));
        }
    }
    return out;
}

RunResult run(const EosParams& eos, const Grid1D& grid, const SolverConfig& cfg,
              const std::vector<Conserved>& initial) {
    cfg.validate();
    RunResult res;
    std::vector<Conserved> U = initial;
    std::vector<double> outs = cfg.snapshot_times;
    outs.push_back(cfg.t_end);
    std::sort(outs.begin(), outs.end());
    outs.erase(std::remove_if(outs.begin(), outs.end(),
                              [&](double t) { return t <= 0.0 || t > cfg.t_end; }),
               outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());

    // Sums and absolute sums of rho, rho u, rho E.
    auto totals = [](const std::vector<Conserved>& V) {
        std::array<double, 6> s{};
        for (const auto& c : V) {
            s[0] += c.rho;
            s[1] += c.mom;
            s[2] += c.ene;
            s[3] += std::abs(c.rho);
            s[4] += std::abs(c.mom);
            s[5] += std::abs(c.ene);
        }
        return s;
    };
    auto track = [&](const std::vector<Conserved>& V) {
        for (const auto& c : V) {
            res.min_rho = std::min(res.min_rho, c.rho);
            for (double f : {c.ra / c.rho, c.rf / c.rho, c.rx / c.rho}) {
                res.min_fraction = std::min(res.min_fraction, f);
                res.max_fraction = std::max(res.max_fraction, f);
            }
        }
    };
    res.min_rho = std::numeric_limits<double>::infinity();
    track(U);
    res.snapshots.push_back({0.0, U});

    double t = 0.0;
    std::size_t next = 0;
    while (next < outs.size()) {
        if (res.steps >= cfg.max_steps) throw SolverError("step limit reached", t, -1);
        try {
            double dt = stable_dt(eos, grid, U, cfg.cfl);
            dt = std::min(dt, outs[next] - t);
            const auto before = totals(U);
            Conserved in;
            if (cfg.splitting == Splitting::Strang) {
                U = source_step(eos, U, 0.5 * dt, cfg.epsilon);
                U = convective_step(eos, grid, U, dt, cfg.boundary, &in);
                U = source_step(eos, U, 0.5 * dt, cfg.epsilon);
            } else {
                U = convective_step(eos, grid, U, dt, cfg.boundary, &in);
                U = source_step(eos, U, dt, cfg.epsilon);
            }
            const auto after = totals(U);
            const double inflow[3] = {in.rho, in.mom, in.ene};
            for (int k = 0; k < 3; ++k) {
                const double scale = std::max({before[k + 3], after[k + 3], 1e-300});
                res.max_step_drift[k] = std::max(
                    res.max_step_drift[k], std::abs(after[k] - before[k] - inflow[k]) / scale);
            }
            t += dt;
        } catch (const NonHyperbolicState& ex) {
            throw SolverError(std::string("non-hyperbolic state: ") + ex.what(), t, ex.cell());
        } catch (const std::exception& ex) {
            throw SolverError(ex.what(), t, -1);
        }
        ++res.steps;
        track(U);
        if (t >= outs[next] - 1e-14 * std::max(1.0, outs[next])) {
            t = outs[next];
            res.snapshots.push_back({t, U});
            ++next;
        }
    }
    return res;
}

std::vector<Conserved> riemann_initial(const EosParams& eos, const Grid1D& grid,
                                       const RiemannProblem& rp) {
    const Conserved L = prim_to_cons(eos, rp.left);
    const Conserved R = prim_to_cons(eos, rp.right);
    std::vector<Conserved> U(static_cast<std::size_t>(grid.n_cells));
    for (int i = 0; i < grid.n_cells; ++i) U[i] = grid.center(i) < rp.x_discontinuity ? L : R;
    return U;
}

void write_snapshot_csv(std::ostream& os, const EosParams& eos, const Grid1D& grid,
                        const Snapshot& snap, const DomeTable* dome) {
    write_eos_comment(os, eos);
    os << "# t=" << snap.t << '\n';
    os << "x,rho,u,p,e,T,alpha,phi,xi,zone,c2_positive\n";
    const auto prec = os.precision(12);
    for (int i = 0; i < static_cast<int>(snap.cells.size()); ++i) {
        const Primitive w = cons_to_prim(eos, snap.cells[i]);
        const TauE mix{1.0 / w.rho, w.e};
        const MixtureEval m = evaluate_mixture(eos, mix, w.r);
        std::string zone = "NA";
        if (dome) {
            try {
                zone = to_string(classify(*dome, mix));
            } catch (const std::exception&) {
            }
        }
        os << grid.center(i) << ',' << w.rho << ',' << w.u << ',' << w.p << ',' << w.e << ','
           << m.T_mix << ',' << w.r.alpha << ',' << w.r.phi << ',' << w.r.xi << ',' << zone << ','
           << (m.hyperbolic() ? 1 : 0) << '\n';
    }
    os.precision(prec);
}

}  // namespace vdw
