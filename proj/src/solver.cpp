#include "fk/solver.hpp"
#include "fk/error.hpp"
#include "fk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fk {

namespace {

// Neighbour lookup honouring the boundary kind. Wrapped indices stay in the core.
struct Grid {
    const Field& u;
    Boundary b;

    long wrap(long k, long lo, long hi) const
    {
        const long n = hi - lo + 1;
        return lo + (((k - lo) % n) + n) % n;
    }
    double operator()(long k1, long k2) const
    {
        const Window& w = u.win;
        if (b != Boundary::dirichlet) k1 = wrap(k1, w.i1_min, w.i1_max);
        if (b == Boundary::periodic) k2 = wrap(k2, w.i2_min, w.i2_max);
        return u.at(k1, k2);
    }
};

double site_lap(const Grid& g, long k1, long k2, double h2)
{
    const double c = g(k1, k2);
    return (g(k1 + 1, k2) + g(k1 - 1, k2) - 2.0 * c + g(k1, k2 + 1) + g(k1, k2 - 1) - 2.0 * c) / h2;
}

std::string site(long k1, long k2) { return "(" + std::to_string(k1) + "," + std::to_string(k2) + ")"; }

void check_boundary_data(const Field& u, Boundary b)
{
    const Window& w = u.win;
    double x;
    for (long k1 = w.i1_min - 1; k1 <= w.i1_max + 1; ++k1)
        for (long k2 = w.i2_min - 1; k2 <= w.i2_max + 1; ++k2) {
            const bool edge1 = k1 < w.i1_min || k1 > w.i1_max, edge2 = k2 < w.i2_min || k2 > w.i2_max;
            if (edge1 && edge2) continue;
            if (edge1 && b != Boundary::dirichlet) continue;
            if (edge2 && b == Boundary::periodic) continue;
            if (!u.get(k1, k2, x))
                throw Error(ErrorKind::invalid_argument, "no boundary data at " + site(k1, k2));
        }
}

// Energy of u2 minus energy of u1 (same boundary), summed from local differences
// so the bond part keeps relative accuracy near an equilibrium. `slack` collects the
// rounding scale of the potential differences, which are not available in that form.
double energy_delta(const Field& u1, const Field& u2, const Potential& pot, Boundary b, double& slack)
{
    const Window& w = u1.win;
    const double c = pot.hooke_d / (2.0 * w.h * w.h);
    const Grid g1{u1, b}, g2{u2, b};
    const long rows = w.i1_max - w.i1_min + 1;
    std::vector<double> vslack(static_cast<size_t>(rows), 0.0);
    auto bond = [&](long a1, long a2, long b1, long b2) {
        const double d1 = g1(b1, b2) - g1(a1, a2), d2 = g2(b1, b2) - g2(a1, a2);
        const double dd = (g2(b1, b2) - g1(b1, b2)) - (g2(a1, a2) - g1(a1, a2));
        return c * dd * (d2 + d1);
    };
    const double total = par::ordered_sum(rows, [&](long r) {
        const long k1 = w.i1_min + r;
        double s = 0.0, sl = 0.0;
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            s += bond(k1, k2, k1 + 1, k2) + bond(k1, k2, k1, k2 + 1);
            // bonds entering from fixed data below/left are counted once here
            if (b == Boundary::dirichlet && k1 == w.i1_min) s += bond(k1 - 1, k2, k1, k2);
            if (b != Boundary::periodic && k2 == w.i2_min) s += bond(k1, k2 - 1, k1, k2);
            if (pot.V) {
                const double va = pot.V(k1, k2, u1.at(k1, k2)), vb = pot.V(k1, k2, u2.at(k1, k2));
                s += vb - va;
                sl += std::abs(va) + std::abs(vb);
            }
        }
        vslack[static_cast<size_t>(r)] = sl;
        return s;
    });
    slack = 0.0;
    for (double v : vslack) slack += v;
    slack *= 4.0 * std::numeric_limits<double>::epsilon();
    return total;
}

} // namespace

Potential zero_potential(double d)
{
    return {[](long, long, double) { return 0.0; }, [](long, long, double) { return 0.0; }, d};
}

Potential sine_gordon_potential(double d)
{
    return {[](long, long, double u) { return -std::cos(u); }, [](long, long, double u) { return std::sin(u); }, d};
}

void validate_potential(const Potential& pot)
{
    if (!(pot.hooke_d > 0.0)) throw Error(ErrorKind::invalid_argument, "hooke_d must be positive");
    if (!pot.V || !pot.dV) throw Error(ErrorKind::invalid_argument, "potential needs V and dV");
    const long ks[3][2] = {{0, 0}, {1, -1}, {-3, 2}};
    for (auto& k : ks)
        for (double x : {-1.0, 0.3, 2.0}) {
            const double e = 1e-5;
            const double fd = (pot.V(k[0], k[1], x + e) - pot.V(k[0], k[1], x - e)) / (2.0 * e);
            const double dv = pot.dV(k[0], k[1], x);
            if (!(std::abs(fd - dv) <= 1e-6 * std::max(1.0, std::abs(dv))))
                throw Error(ErrorKind::invalid_argument, "dV disagrees with V at " + site(k[0], k[1]) + ", u = "
                                                             + fmt17(x) + ": " + fmt17(dv) + " vs " + fmt17(fd));
        }
}

double default_step(double h, double d) { return h * h / (4.0 * d); }

double energy(const Field& u, const Potential& pot, Boundary b)
{
    const Window& w = u.win;
    check_boundary_data(u, b);
    const double c = pot.hooke_d / (2.0 * w.h * w.h);
    const Grid g{u, b};
    auto sq = [](double x) { return x * x; };
    return par::ordered_sum(w.i1_max - w.i1_min + 1, [&](long r) {
        const long k1 = w.i1_min + r;
        double s = 0.0;
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double x = g(k1, k2);
            s += c * (sq(g(k1 + 1, k2) - x) + sq(g(k1, k2 + 1) - x));
            if (b == Boundary::dirichlet && k1 == w.i1_min) s += c * sq(x - g(k1 - 1, k2));
            if (b != Boundary::periodic && k2 == w.i2_min) s += c * sq(x - g(k1, k2 - 1));
            if (pot.V) s += pot.V(k1, k2, x);
        }
        return s;
    });
}

Field residual(const Field& u, const Potential& pot, Boundary b)
{
    const Window& w = u.win;
    check_boundary_data(u, b);
    Field r(w);
    const Grid g{u, b};
    const double h2 = w.h * w.h;
    par::for_rows(w.i1_max - w.i1_min + 1, [&](long row) {
        const long k1 = w.i1_min + row;
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double dv = pot.dV ? pot.dV(k1, k2, g(k1, k2)) : 0.0;
            r.set(k1, k2, pot.hooke_d * site_lap(g, k1, k2, h2) - dv);
        }
    });
    return r;
}

RelaxResult relax(const Field& u0, const Potential& pot, const SolverConfig& cfg)
{
    if (!(cfg.step > 0.0)) throw Error(ErrorKind::invalid_argument, "step must be positive");
    if (!(cfg.residual_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "residual_tol must be positive");
    if (cfg.max_iters <= 0) throw Error(ErrorKind::invalid_argument, "max_iters must be positive");
    validate_potential(pot);
    check_boundary_data(u0, cfg.boundary);
    const Window& w = u0.win;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2)
            if (!u0.valid(k1, k2)) throw Error(ErrorKind::invalid_argument, "no initial value at " + site(k1, k2));

    RelaxResult res;
    res.u = u0;
    Field trial = u0;
    double E = energy(res.u, pot, cfg.boundary);
    if (!std::isfinite(E)) throw Error(ErrorKind::solver_failure, "initial energy is not finite");
    res.energy.push_back(E);
    double step = cfg.step;
    const long rows = w.i1_max - w.i1_min + 1;

    for (;;) {
        Field r = residual(res.u, pot, cfg.boundary);
        const double rmax = par::ordered_max(rows, [&](long row) {
            double m = 0.0;
            for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
                const double x = std::abs(r.at(w.i1_min + row, k2));
                if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
                m = std::max(m, x);
            }
            return m;
        });
        if (!std::isfinite(rmax)) throw Error(ErrorKind::solver_failure, "residual is not finite");
        res.final_residual_max = rmax;
        if (rmax <= cfg.residual_tol) {
            res.converged = true;
            break;
        }
        if (res.iters >= cfg.max_iters) break;

        bool accepted = false;
        for (int tries = 0; tries <= 30; ++tries) {
            par::for_rows(rows, [&](long row) {
                const long k1 = w.i1_min + row;
                for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2)
                    trial.set(k1, k2, res.u.at(k1, k2) + step * r.at(k1, k2));
            });
            double slack = 0.0;
            const double dE = energy_delta(res.u, trial, pot, cfg.boundary, slack);
            if (!std::isfinite(dE)) throw Error(ErrorKind::solver_failure, "energy is not finite");
            if (dE <= slack) {
                std::swap(res.u.v, trial.v);
                E = energy(res.u, pot, cfg.boundary);
                if (!std::isfinite(E)) throw Error(ErrorKind::solver_failure, "energy is not finite");
                res.energy.push_back(E);
                res.accepted_delta.push_back(dE);
                accepted = true;
                break;
            }
            if (tries == 30) break;
            step *= 0.5;
            ++res.halvings;
        }
        if (!accepted) break; // stalled: no descent step found
        ++res.iters;
    }
    res.final_step = step;
    return res;
}

RelaxResult relax_profile_1d(const std::function<double(double)>& vtilde, const Potential& pot, double h, long n,
                             const SolverConfig& cfg)
{
    if (!(h > 0.0) || n < 1) throw Error(ErrorKind::invalid_argument, "need h > 0 and n >= 1");
    Window w{h, 0, 0, -n, n, 1};
    Field u0(w);
    for (long k1 = -1; k1 <= 1; ++k1)
        for (long k2 = -n - 1; k2 <= n + 1; ++k2) u0.set(k1, k2, vtilde(h * static_cast<double>(k2)));
    SolverConfig c = cfg;
    c.boundary = Boundary::periodic_x1;
    return relax(u0, pot, c);
}

} // namespace fk
