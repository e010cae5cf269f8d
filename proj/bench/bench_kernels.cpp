// Parallel kernels against the serial reference on Example 4 fields.

#include "fk/angular.hpp"
#include "fk/calculus.hpp"
#include "fk/diagnostics.hpp"
#include "fk/examples.hpp"
#include "fk/reference.hpp"
#include "fk/solver.hpp"

#include <benchmark/benchmark.h>

using namespace fk;

namespace {

const TailModels& none()
{
    static const TailModels t = TailModels::uniform({{Decay::domain, 0}, {Decay::domain, 0}});
    return t;
}

struct Setup {
    ExampleSpec ex;
    Field u;
    AngularData ang;
    explicit Setup(double h)
        : ex(build_example4(h, sine_gordon_profile())), u(sample(ex.u, make_window(h, 10.0, 4))), ang(decompose(u))
    {
    }
};

double mesh(const benchmark::State& s) { return 1.0 / static_cast<double>(s.range(0)); }

void BM_lap_parallel(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(lap(st.u));
    s.SetItemsProcessed(s.iterations() * static_cast<long>(st.u.win.size()));
}

void BM_lap_reference(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(ref::lap(st.u));
    s.SetItemsProcessed(s.iterations() * static_cast<long>(st.u.win.size()));
}

void BM_decompose_parallel(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(decompose(st.u));
}

void BM_decompose_reference(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(ref::decompose(st.u));
}

void BM_angular_sums_parallel(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(angular_sums(st.ang.rho_plus, st.ang.theta_plus, st.ex.theta_inf_plus, none()));
}

void BM_angular_sums_reference(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(ref::angular_totals(st.ang.rho_plus, st.ang.theta_plus, st.ex.theta_inf_plus));
}

void BM_kappa0_parallel(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(kappa0(st.u, st.ex.src, Sign::plus));
}

void BM_kappa0_reference(benchmark::State& s)
{
    Setup st(mesh(s));
    for (auto _ : s) benchmark::DoNotOptimize(ref::kappa0(st.u, st.ex.src, Sign::plus));
}

void BM_relax_step(benchmark::State& s)
{
    const double h = mesh(s);
    Field u0 = sample([h](long, long b) { return h * b; }, make_window(h, 10.0, 1));
    u0.set(0, 0, 1.0);
    SolverConfig cfg;
    cfg.step = default_step(h, 1.0);
    cfg.max_iters = 10;
    for (auto _ : s) benchmark::DoNotOptimize(relax(u0, zero_potential(), cfg));
}

} // namespace

BENCHMARK(BM_lap_parallel)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_lap_reference)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_decompose_parallel)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_decompose_reference)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_angular_sums_parallel)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_angular_sums_reference)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_kappa0_parallel)->Arg(8)->Arg(16);
BENCHMARK(BM_kappa0_reference)->Arg(8)->Arg(16);
BENCHMARK(BM_relax_step)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
