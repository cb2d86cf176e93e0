#include <vdw/cli.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include <vdw/csv.hpp>
#include <vdw/euler1d.hpp>
#include <vdw/phase_diagram.hpp>
#include <vdw/relax_dynamics.hpp>

namespace vdw {

namespace fs = std::filesystem;

namespace {

std::ofstream open_csv(const fs::path& path, const EosParams& eos) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os.precision(12);
    write_eos_comment(os, eos);
    return os;
}

std::string numbered(const std::string& stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem.c_str(), i);
    return buf;
}

std::string zone_or_na(const DomeTable& dome, TauE x) {
    if (!in_domain(dome.eos(), x)) return "NA";
    try {
        return to_string(classify(dome, x));
    } catch (const DomainError&) {
        return "NA";
    }
}

void write_point(std::ostream& os, const DomeTable& dome, TauE x) {
    const ThermoEval ev = evaluate(dome.eos(), x);
    os << x.tau << ',' << x.e << ',' << ev.p << ',' << ev.T << ',' << zone_or_na(dome, x);
}

// n points from lo to hi with constant ratio.
std::vector<double> geomspace(double lo, double hi, long n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) v[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return v;
}

std::vector<double> stepped(double lo, double hi, double step) {
    const long n = std::lround((hi - lo) / step) + 1;
    std::vector<double> v;
    for (long k = 0; k < n; ++k) v.push_back(lo + k * step);
    return v;
}

DomeTable dome_from(const Config& cfg, const EosParams& eos) {
    const long n = cfg.get_int("n_samples", DomeTable::kDefaultSamples);
    const double T_min = cfg.get_double("T_min", DomeTable::kDefaultTmin);
    if (n < 8) throw ConfigError("n_samples must be at least 8");
    return DomeTable::build(eos, static_cast<int>(n), T_min);
}

void write_eigs(std::ostream& os, const std::array<std::complex<double>, 3>& ev) {
    for (const auto& z : ev) os << ',' << z.real() << ',' << z.imag();
}

Fractions fractions_from(const std::vector<double>& g) {
    const Fractions r{g[0], g[1], g[2]};
    if (!r.in_open_cube()) throw ConfigError("fractions must lie in (0,1)");
    return r;
}

}  // namespace

void cmd_phase_diagram(const Config& cfg, const fs::path& out) {
    const EosParams eos = cfg.eos();
    const DomeTable dome = dome_from(cfg, eos);
    const CriticalPoint& c = dome.critical();

    std::vector<double> temps = cfg.has("isotherms") ? cfg.get_list("isotherms")
                                                     : std::vector<double>{0.85, 0.95, 1.0, 1.05, 1.077, 1.1};
    temps.push_back(c.T);
    const double tau_lo = cfg.get_double("tau_min", 0.6);
    const double tau_hi = cfg.get_double("tau_max", 12.0);
    const long n_tau = cfg.get_int("n_tau", 400);
    const double zt_lo = cfg.get_double("zones_tau_min", 0.6);
    const double zt_hi = cfg.get_double("zones_tau_max", 6.0);
    const double zt_step = cfg.get_double("zones_tau_step", 0.05);
    const double ze_lo = cfg.get_double("zones_e_min", 1.0);
    const double ze_hi = cfg.get_double("zones_e_max", 4.0);
    const double ze_step = cfg.get_double("zones_e_step", 0.05);
    cfg.check_all_used();
    if (!(tau_lo > eos.b && tau_hi > tau_lo && n_tau >= 2)) throw ConfigError("bad tau range");
    if (!(zt_step > 0.0 && ze_step > 0.0 && zt_lo > eos.b)) throw ConfigError("bad zones raster");
    fs::create_directories(out);
    const std::vector<double> taus = geomspace(tau_lo, tau_hi, n_tau);

    {
        auto os = open_csv(out / "isotherms.csv", eos);
        os << "# isotherm temperatures (last is Tc)";
        for (double T : temps) os << ' ' << T;
        os << "\ntau,e,p,T,zone\n";
        for (double T : temps) {
            for (double t : taus) {
                write_point(os, dome, {t, isotherm_energy(eos, t, T)});
                os << '\n';
            }
        }
    }
    {
        auto os = open_csv(out / "spinodal.csv", eos);
        os << "tau,e,p,T,zone\n";
        for (double t : taus) {
            write_point(os, dome, {t, spinodal_energy(eos, t)});
            os << '\n';
        }
    }
    {
        auto os = open_csv(out / "dome.csv", eos);
        os << "tau,e,p,T,zone,branch\n";
        for (const auto& row : dome.rows()) {
            write_point(os, dome, row.x1);
            os << ",liquid\n";
            write_point(os, dome, row.x2);
            os << ",vapor\n";
        }
    }
    {
        auto os = open_csv(out / "zones.csv", eos);
        os << "tau,e,p,T,zone\n";
        for (double t : stepped(zt_lo, zt_hi, zt_step)) {
            for (double e : stepped(ze_lo, ze_hi, ze_step)) {
                if (!in_domain(eos, {t, e})) continue;
                write_point(os, dome, {t, e});
                os << '\n';
            }
        }
    }
    std::cout << "phase-diagram: " << dome.rows().size() << " dome rows, Tc=" << c.T
              << ", files in " << out.string() << '\n';
}

void cmd_relax(const Config& cfg, const fs::path& out, std::uint64_t seed) {
    const EosParams eos = cfg.eos();
    const TauE mix{cfg.get_double("tau"), cfg.get_double("e")};
    const double t_final = cfg.get_double("t_final", 200.0);
    IntegratorOptions opts;
    opts.rtol = cfg.get_double("rtol", opts.rtol);
    opts.atol = cfg.get_double("atol", opts.atol);
    const long n_random = cfg.get_int("n_random", 0);
    const bool write_traj = cfg.get_bool("write_trajectories", true);
    std::vector<Fractions> r0s;
    if (cfg.has("r0")) {
        for (const auto& g : cfg.get_groups("r0", 3)) r0s.push_back(fractions_from(g));
    }
    cfg.check_all_used();
    if (!in_domain(eos, mix)) throw ConfigError("mixture state outside the EoS domain");
    if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (n_random < 0) throw ConfigError("n_random must be non-negative");
    const std::size_t n_explicit = r0s.size();
    std::mt19937_64 rng(seed);
    for (long k = 0; k < n_random; ++k) r0s.push_back(sample_fractions(eos, mix, rng));
    if (r0s.empty()) throw ConfigError("give r0 or n_random");
    fs::create_directories(out);

    auto summary = open_csv(out / "equilibria.csv", eos);
    summary << "# mix tau=" << mix.tau << " e=" << mix.e << " t_final=" << t_final
            << " seed=" << seed << '\n';
    summary << "id,source,alpha0,phi0,xi0,kind,alpha_raw,phi_raw,xi_raw,alpha,phi,xi,residual,"
               "raw_residual,gap_p,gap_T,gap_mu,raw_gap_p,raw_gap_T,raw_gap_mu,"
               "l1_re,l1_im,l2_re,l2_im,l3_re,l3_im,steps,rejected,entropy_violations\n";
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < r0s.size(); ++i) {
        const Fractions& r0 = r0s[i];
        const Trajectory tr = integrate(eos, mix, r0, t_final, opts);
        const EquilibriumReport rep = detect_equilibrium(eos, mix, tr);
        ++counts[static_cast<int>(rep.kind)];
        if (write_traj) {
            std::ofstream os(out / numbered("trajectory", i));
            if (!os) throw ConfigError("cannot write trajectory file");
            write_trajectory_csv(os, eos, mix, tr);
        }
        summary << i << ',' << (i < n_explicit ? "explicit" : "random") << ',' << r0.alpha << ','
                << r0.phi << ',' << r0.xi << ',' << to_string(rep.kind) << ',' << rep.r_raw.alpha
                << ',' << rep.r_raw.phi << ',' << rep.r_raw.xi << ',' << rep.r_final.alpha << ','
                << rep.r_final.phi << ',' << rep.r_final.xi << ',' << rep.residual << ','
                << rep.raw_residual << ',' << rep.gaps.p << ',' << rep.gaps.T << ','
                << rep.gaps.mu << ',' << rep.raw_gaps.p << ',' << rep.raw_gaps.T << ','
                << rep.raw_gaps.mu;
        write_eigs(summary, rep.eigenvalues);
        summary << ',' << tr.times.size() - 1 << ',' << tr.rejected << ','
                << tr.entropy_violations << '\n';
    }
    std::cout << "relax: " << r0s.size() << " runs, Saturation " << counts[0]
              << ", Identification " << counts[1] << ", NotConverged " << counts[2] << '\n';
}

void cmd_eigen(const Config& cfg, const fs::path& out) {
    const EosParams eos = cfg.eos();
    const DomeTable dome = dome_from(cfg, eos);
    const std::vector<std::vector<double>> states =
        cfg.has("states") ? cfg.get_groups("states", 2)
                          : std::vector<std::vector<double>>{
                                {1.99, 2.1}, {3.9, 2.49}, {2.39, 1.59}, {1.79, 1.49}, {1.89, 1.99}};
    const std::vector<std::vector<double>> ident =
        cfg.has("identification") ? cfg.get_groups("identification", 2)
                                  : std::vector<std::vector<double>>{{3.0, 3.1}, {3.2, 2.5}};
    cfg.check_all_used();
    fs::create_directories(out);
    auto os = open_csv(out / "eigen.csv", eos);
    os << "# saturation rows: branch 1 is the vapor phase\n";
    os << "kind,tau,e,alpha,phi,xi,tau1,e1,tau2,e2,l1_re,l1_im,l2_re,l2_im,l3_re,l3_im,det\n";
    for (const auto& s : states) {
        const TauE mix{s[0], s[1]};
        const EquilibriumFractions ef = equilibrium_fractions(dome, mix);
        const Fractions& r = ef.r_star;
        const PhasicDecomposition d = phasic_from_fractions(eos, mix, r);
        const Eigen::Matrix3d J = jacobian(eos, mix, r);
        os << "saturation," << mix.tau << ',' << mix.e << ',' << r.alpha << ',' << r.phi << ','
           << r.xi << ',' << d.x1.tau << ',' << d.x1.e << ',' << d.x2.tau << ',' << d.x2.e;
        write_eigs(os, eigenvalues(J));
        os << ',' << J.determinant() << '\n';
    }
    for (const auto& s : ident) {
        const TauE mix{s[0], s[1]};
        check_domain(eos, mix);
        const Eigen::Matrix3d J = identification_jacobian(eos, mix);
        os << "identification," << mix.tau << ',' << mix.e << ",0.5,0.5,0.5," << mix.tau << ','
           << mix.e << ',' << mix.tau << ',' << mix.e;
        write_eigs(os, eigenvalues(J));
        os << ',' << J.determinant() << '\n';
    }
    std::cout << "eigen: " << states.size() << " saturation and " << ident.size()
              << " identification rows in " << (out / "eigen.csv").string() << '\n';
}

void cmd_euler(const Config& cfg, const fs::path& out) {
    const EosParams eos = cfg.eos();
    Grid1D grid;
    grid.n_cells = static_cast<int>(cfg.get_int("n_cells", 500));
    grid.x_min = cfg.get_double("x_min", 0.0);
    grid.x_max = cfg.get_double("x_max", 1.0);
    SolverConfig sc;
    sc.t_end = cfg.get_double("t_end");
    sc.cfl = cfg.get_double("cfl", 0.9);
    sc.epsilon = cfg.get_double("epsilon");
    const std::string bc = cfg.get_string("boundary", "transmissive");
    if (bc == "transmissive") {
        sc.boundary = Boundary::Transmissive;
    } else if (bc == "periodic") {
        sc.boundary = Boundary::Periodic;
    } else {
        throw ConfigError("boundary must be transmissive or periodic");
    }
    const std::string sp = cfg.get_string("splitting", "godunov");
    if (sp == "godunov") {
        sc.splitting = Splitting::Godunov;
    } else if (sp == "strang") {
        sc.splitting = Splitting::Strang;
    } else {
        throw ConfigError("splitting must be godunov or strang");
    }
    const long n_snap = cfg.get_int("snapshots", 4);
    const bool zones = cfg.get_bool("zones", true);
    RiemannProblem rp;
    rp.x_discontinuity = cfg.get_double("x_discontinuity", 0.5 * (grid.x_min + grid.x_max));
    auto side = [&](const std::string& pre) {
        Primitive w;
        w.rho = cfg.get_double(pre + "rho");
        w.u = cfg.get_double(pre + "u", 0.0);
        w.p = cfg.get_double(pre + "p");
        w.r = {cfg.get_double(pre + "alpha"), cfg.get_double(pre + "phi"), cfg.get_double(pre + "xi")};
        return w;
    };
    rp.left = side("left_");
    rp.right = side("right_");
    cfg.check_all_used();
    if (grid.n_cells < 4 || !(grid.x_max > grid.x_min)) throw ConfigError("bad grid");
    if (n_snap < 1) throw ConfigError("snapshots must be at least 1");
    if (!rp.left.r.in_open_cube() || !rp.right.r.in_open_cube()) {
        throw ConfigError("fractions must lie in (0,1)");
    }
    if (!(rp.left.rho > 0.0 && rp.right.rho > 0.0)) throw ConfigError("densities must be positive");
    sc.validate();
    for (long k = 1; k < n_snap; ++k) sc.snapshot_times.push_back(sc.t_end * k / n_snap);

    const std::vector<Conserved> U0 = riemann_initial(eos, grid, rp);
    const RunResult res = run(eos, grid, sc, U0);
    fs::create_directories(out);
    std::optional<DomeTable> dome;
    if (zones) dome = DomeTable::build(eos);
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        std::ofstream os(out / numbered("snapshot", i));
        if (!os) throw ConfigError("cannot write snapshot file");
        write_snapshot_csv(os, eos, grid, res.snapshots[i], dome ? &*dome : nullptr);
    }
    auto os = open_csv(out / "summary.csv", eos);
    os << "steps,t_end,drift_rho,drift_mom,drift_ene,min_rho,min_fraction,max_fraction\n";
    os << res.steps << ',' << res.snapshots.back().t << ',' << res.max_step_drift[0] << ','
       << res.max_step_drift[1] << ',' << res.max_step_drift[2] << ',' << res.min_rho << ','
       << res.min_fraction << ',' << res.max_fraction << '\n';
    std::cout << "euler: " << res.steps << " steps to t=" << res.snapshots.back().t
              << ", max per-step drift (rho, rho u, rho E) = (" << res.max_step_drift[0] << ", "
              << res.max_step_drift[1] << ", " << res.max_step_drift[2] << "), min rho "
              << res.min_rho << ", fractions in [" << res.min_fraction << ", " << res.max_fraction
              << "]\n";
}

int run_cli(int argc, char** argv) {
    CLI::App app{"van der Waals liquid-vapor relaxation toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "key = value config file");
        sub->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "seed for all sampling")->capture_default_str();
        sub->add_option("--set", overrides, "override a config entry, key=value");
    };
    CLI::App* pd = app.add_subcommand("phase-diagram", "isotherms, spinodal, dome and zone raster");
    CLI::App* rl = app.add_subcommand("relax", "integrate the fraction dynamics");
    CLI::App* eg = app.add_subcommand("eigen", "Jacobian spectrum at saturation and identification");
    CLI::App* eu = app.add_subcommand("euler", "1D homogeneous relaxation Riemann problem");
    for (CLI::App* s : {pd, rl, eg, eu}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        Config cfg;
        if (!config_path.empty()) cfg = Config::load(config_path);
        for (const auto& o : overrides) cfg.set(o);
        const fs::path out(out_dir);
        if (pd->parsed()) cmd_phase_diagram(cfg, out);
        if (rl->parsed()) cmd_relax(cfg, out, seed);
        if (eg->parsed()) cmd_eigen(cfg, out);
        if (eu->parsed()) cmd_euler(cfg, out);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& ex) {
        std::cerr << "solver error at t=" << ex.time() << " cell " << ex.cell() << ": " << ex.what()
                  << '\n';
        return kExitNumerical;
    } catch (const std::exception& ex) {
        std::cerr << "numerical error: " << ex.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace vdw
