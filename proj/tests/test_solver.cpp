#include "fk/error.hpp"
#include "fk/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fk;

namespace {
Field field(double h, double r, int halo, Closure c) { return sample(c, make_window(h, r, halo)); }
} // namespace

TEST_CASE("energy examples")
{
    const double h = 0.5;
    CHECK(energy(field(h, 2.0, 1, [](long, long) { return 0.0; }), zero_potential()) == 0.0);
    // u = x2: every vertical bond carries 1/2; the core has n columns of n+1 vertical bonds
    Field u = field(h, 2.0, 1, [h](long, long b) { return h * b; });
    const long n = 9;
    CHECK(energy(u, zero_potential()) == doctest::Approx(0.5 * n * (n + 1)));
    // single bump: four incident bonds
    const double a = 0.7;
    Field bump = field(h, 2.0, 1, [a](long i, long j) { return (i == 1 && j == -2) ? a : 0.0; });
    CHECK(energy(bump, zero_potential()) == doctest::Approx(2 * a * a / (h * h)));
    CHECK(energy(bump, zero_potential(3.0)) == doctest::Approx(3 * 2 * a * a / (h * h)));
    // potential term on core sites only
    Field c = field(h, 1.0, 1, [](long, long) { return 0.0; });
    CHECK(energy(c, sine_gordon_potential()) == doctest::Approx(-25.0));
}

TEST_CASE("residual examples")
{
    const double h = 0.5;
    Field c = field(h, 2.0, 1, [](long, long) { return 2.0 * std::acos(-1.0); });
    CHECK(std::abs(residual(c, sine_gordon_potential()).at(0, 0)) <= 1e-15);
    Field u = field(h, 2.0, 1, [h](long, long b) { return h * b; });
    Field r = residual(u, sine_gordon_potential());
    for (long b = -4; b <= 4; ++b) CHECK(r.at(2, b) == doctest::Approx(-std::sin(h * b)).epsilon(1e-14));
    // adding a constant leaves the V = 0 residual unchanged
    Field v = field(h, 2.0, 1, [h](long a, long b) { return std::sin(h * a) * b; });
    Field w = field(h, 2.0, 1, [h](long a, long b) { return std::sin(h * a) * b + 5.0; });
    Field rv = residual(v, zero_potential()), rw = residual(w, zero_potential());
    for (long a = -4; a <= 4; ++a) CHECK(rv.at(a, 1) == doctest::Approx(rw.at(a, 1)).epsilon(1e-12));
}

TEST_CASE("harmonic fill-in from random start")
{
    const double h = 0.5;
    Window win = make_window(h, 5.0, 1); // 21 x 21 core
    Field u0 = sample([h](long, long b) { return h * b; }, win);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    for (long a = win.i1_min; a <= win.i1_max; ++a)
        for (long b = win.i2_min; b <= win.i2_max; ++b) u0.set(a, b, U(rng));
    SolverConfig cfg;
    cfg.step = default_step(h, 1.0);
    cfg.residual_tol = 1e-10;
    RelaxResult r = relax(u0, zero_potential(), cfg);
    CHECK(r.converged);
    CHECK(r.final_residual_max <= 1e-10);
    for (double d : r.accepted_delta) CHECK(d <= 0.0);
    for (std::size_t i = 1; i < r.energy.size(); ++i)
        CHECK(r.energy[i] <= r.energy[i - 1] + 1e-14 * std::abs(r.energy[i - 1]));
    // the discrete harmonic function with these data is x2
    double err = 0;
    for (long a = win.i1_min; a <= win.i1_max; ++a)
        for (long b = win.i2_min; b <= win.i2_max; ++b) err = std::max(err, std::abs(r.u.at(a, b) - h * b));
    CHECK(err <= 1e-9);
}

TEST_CASE("an equilibrium is a fixed point")
{
    const double h = 0.5;
    Field u = field(h, 2.0, 1, [h](long a, long b) { return 0.3 * h * a + h * b; });
    SolverConfig cfg;
    cfg.step = default_step(h, 1.0);
    RelaxResult r = relax(u, zero_potential(), cfg);
    CHECK(r.converged);
    CHECK(r.iters == 0);
    CHECK(r.u.v == u.v);
}

TEST_CASE("too large a step is halved, never accepted uphill")
{
    const double h = 0.5;
    Field u0 = field(h, 2.0, 1, [h](long a, long b) { return h * b + ((a + b) % 2 ? 0.5 : -0.5); });
    SolverConfig cfg;
    cfg.step = 10.0;
    cfg.max_iters = 50;
    RelaxResult r = relax(u0, zero_potential(), cfg);
    CHECK(r.halvings > 0);
    CHECK(r.final_step < 10.0);
    for (double d : r.accepted_delta) CHECK(d <= 0.0);
}

TEST_CASE("periodic boundary: constant plus zero potential is stationary and energy wraps")
{
    const double h = 1.0;
    Window w{h, 0, 3, 0, 3, 0};
    Field u(w);
    for (long a = 0; a <= 3; ++a)
        for (long b = 0; b <= 3; ++b) u.set(a, b, a == 0 ? 1.0 : 0.0);
    // column a = 0 differs from its two neighbours on each of 4 rows
    CHECK(energy(u, zero_potential(), Boundary::periodic) == doctest::Approx(0.5 * 8));
    Field r = residual(u, zero_potential(), Boundary::periodic);
    CHECK(r.at(0, 2) == doctest::Approx(-2.0));
    CHECK(r.at(3, 2) == doctest::Approx(1.0));
}

TEST_CASE("solver errors")
{
    const double h = 0.5;
    Field u = field(h, 1.0, 1, [](long, long) { return 0.0; });
    SolverConfig cfg;
    CHECK_THROWS_AS(relax(u, zero_potential(), cfg), Error); // step 0
    cfg.step = 0.01;
    Potential bad = zero_potential();
    bad.dV = [](long, long, double x) { return x; };
    CHECK_THROWS_AS(relax(u, bad, cfg), Error);
    CHECK_THROWS_AS(validate_potential(zero_potential(-1.0)), Error);
    // unbounded below: the flow runs to overflow
    Potential runaway{[](long, long, double x) { return -std::exp(x); }, [](long, long, double x) { return -std::exp(x); },
                      1.0};
    cfg.step = 1.0;
    cfg.max_iters = 100000;
    try {
        relax(u, runaway, cfg);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::solver_failure);
    }
    Field nohalo = field(h, 1.0, 0, [](long, long) { return 0.0; });
    nohalo.closure = nullptr;
    CHECK_THROWS_AS(relax(nohalo, zero_potential(), cfg), Error);
}

TEST_CASE("non-convergence returns the last iterate with a flag")
{
    const double h = 0.5;
    Field u0 = field(h, 5.0, 1, [h](long a, long b) { return h * b + (a == 0 && b == 0 ? 1.0 : 0.0); });
    SolverConfig cfg;
    cfg.step = default_step(h, 1.0);
    cfg.max_iters = 3;
    RelaxResult r = relax(u0, zero_potential(), cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iters == 3);
    CHECK(r.energy.back() < r.energy.front());
}

TEST_CASE("discrete sine-Gordon kink on a line")
{
    const double h = 0.5;
    SolverConfig cfg;
    cfg.step = default_step(h, 1.0);
    cfg.residual_tol = 1e-11;
    cfg.max_iters = 1000000;
    RelaxResult r = relax_profile_1d([](double t) { return 4 * std::atan(std::exp(t)); }, sine_gordon_potential(), h,
                                     16, cfg);
    CHECK(r.converged);
    for (long k = -16; k <= 16; ++k) {
        const double v = r.u.at(0, k);
        const double l = (r.u.at(0, k + 1) + r.u.at(0, k - 1) - 2 * v) / (h * h);
        CHECK(std::abs(l - std::sin(v)) <= 1e-11);
        CHECK(r.u.at(0, k + 1) > v);
    }
}
