#pragma once

#include "fk/lattice.hpp"

#include <functional>
#include <vector>

namespace fk {

using SitePotential = std::function<double(long k1, long k2, double u)>;

struct Potential {
    SitePotential V;
    SitePotential dV; // dV/du
    double hooke_d = 1.0;
};

// V = 0.
Potential zero_potential(double d = 1.0);
// V = -cos u, the sine-Gordon substrate.
Potential sine_gordon_potential(double d = 1.0);

// Throws invalid-argument if d <= 0 or dV disagrees with a central difference of V
// by more than 1e-6 relative at a few probe points.
void validate_potential(const Potential& pot);

enum class Boundary {
    dirichlet,   // halo ring (or closure) holds fixed data
    periodic,    // the core is a torus
    periodic_x1, // torus along k1, fixed data along k2
};

struct SolverConfig {
    double step = 0.0;
    long max_iters = 100000;
    double residual_tol = 1e-10;
    Boundary boundary = Boundary::dirichlet;
};

// Finite-window energy: every bond with at least one core endpoint, plus V on core sites.
double energy(const Field& u, const Potential& pot, Boundary b = Boundary::dirichlet);

// d*lap(u) - dV(i, u_i) on core sites.
Field residual(const Field& u, const Potential& pot, Boundary b = Boundary::dirichlet);

struct RelaxResult {
    Field u;
    long iters = 0;
    double final_residual_max = 0.0;
    bool converged = false;
    int halvings = 0;
    double final_step = 0.0;
    std::vector<double> energy;         // energy after each accepted step, starting with u0
    std::vector<double> accepted_delta; // energy change of each accepted step, from local differences
};

RelaxResult relax(const Field& u0, const Potential& pot, const SolverConfig& cfg);

// Largest step for which the Jacobi sweep is stable with V = 0: h^2 / (4d).
double default_step(double h, double d);

// Discrete 1D equilibrium d*(v_{k+1} + v_{k-1} - 2 v_k)/h^2 = dV(v_k) on k in [-n, n],
// with v_{+-(n+1)} = vtilde(+-h(n+1)), seeded from vtilde. Returns values for k in [-n-1, n+1].
RelaxResult relax_profile_1d(const std::function<double(double)>& vtilde, const Potential& pot, double h, long n,
                             const SolverConfig& cfg);

} // namespace fk
