#pragma once

// Homogeneous relaxation model in 1D: Euler equations for (rho, rho u, rho E) with
// transported fractions relaxed by the source rho F(r)/epsilon.

#include <array>
#include <iosfwd>
#include <vector>

#include <vdw/fractions.hpp>
#include <vdw/mixture_eos.hpp>
#include <vdw/phase_diagram.hpp>

namespace vdw {

struct Conserved {
    double ra = 0.0;   // rho alpha
    double rf = 0.0;   // rho phi
    double rx = 0.0;   // rho xi
    double rho = 0.0;
    double mom = 0.0;  // rho u
    double ene = 0.0;  // rho E, E = e + u^2/2

    std::array<double, 6> as_array() const { return {ra, rf, rx, rho, mom, ene}; }
    Conserved& operator+=(const Conserved& o);
    Conserved& operator*=(double k);
};
Conserved operator+(Conserved a, const Conserved& b);
Conserved operator-(Conserved a, const Conserved& b);
Conserved operator*(double k, Conserved a);

struct Primitive {
    double rho = 1.0;
    double u = 0.0;
    double p = 0.0;
    Fractions r;
    double e = 0.0;  // filled by cons_to_prim / prim_to_cons
};

// Solves for e from p at frozen fractions. Throws NonPositiveDensity,
// FractionOutOfRange or NoConvergence.
Conserved prim_to_cons(const EosParams& eos, Primitive w);
Primitive cons_to_prim(const EosParams& eos, const Conserved& U);

Conserved physical_flux(const EosParams& eos, const Conserved& U);

// HLLC flux with Davis wave speeds. Throws NonHyperbolicState if c^2 <= 0 on a side.
Conserved hllc_flux(const EosParams& eos, const Conserved& L, const Conserved& R);

struct Grid1D {
    static constexpr int kGhosts = 2;
    int n_cells = 100;
    double x_min = 0.0;
    double x_max = 1.0;

    double dx() const { return (x_max - x_min) / n_cells; }
    double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

enum class Boundary { Transmissive, Periodic };
enum class Splitting { Godunov, Strang };

struct SolverConfig {
    double cfl = 0.9;
    double epsilon = 1e-2;
    double t_end = 0.4;
    Boundary boundary = Boundary::Transmissive;
    Splitting splitting = Splitting::Godunov;
    // Output times besides t = 0 and t_end.
    std::vector<double> snapshot_times;
    long max_steps = 10'000'000;

    void validate() const;  // throws ConfigError
};

double stable_dt(const EosParams& eos, const Grid1D& grid, const std::vector<Conserved>& U,
                 double cfl);

// inflow, if given, receives the change of the cell sums due to the two boundary fluxes.
std::vector<Conserved> convective_step(const EosParams& eos, const Grid1D& grid,
                                       const std::vector<Conserved>& U, double dt,
                                       Boundary boundary = Boundary::Transmissive,
                                       Conserved* inflow = nullptr);

// RK4 on dr/dt = F(r; tau, e)/epsilon in every cell with internal steps <= epsilon/10.
// rho, rho u and rho E are left untouched.
std::vector<Conserved> source_step(const EosParams& eos, const std::vector<Conserved>& U,
                                   double dt, double epsilon);

struct Snapshot {
    double t = 0.0;
    std::vector<Conserved> cells;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    long steps = 0;
    // Largest change of the totals of rho, rho u, rho E over one step, net of boundary
    // fluxes, relative to the sum of absolute cell values.
    std::array<double, 3> max_step_drift{};
    double min_rho = 0.0;
    double min_fraction = 1.0;
    double max_fraction = 0.0;
};

// Godunov (or Strang) splitting until t_end. Step failures are rethrown as SolverError.
RunResult run(const EosParams& eos, const Grid1D& grid, const SolverConfig& cfg,
              const std::vector<Conserved>& initial);

struct RiemannProblem {
    Primitive left;
    Primitive right;
    double x_discontinuity = 0.5;
};

std::vector<Conserved> riemann_initial(const EosParams& eos, const Grid1D& grid,
                                       const RiemannProblem& rp);

// Columns x, rho, u, p, e, T, alpha, phi, xi, zone, c2_positive. zone is written as NA
// when no dome is given or the state is outside the classified range.
void write_snapshot_csv(std::ostream& os, const EosParams& eos, const Grid1D& grid,
                        const Snapshot& snap, const DomeTable* dome = nullptr);

}  // namespace vdw
