#include "fk/calculus.hpp"
#include "fk/diagnostics.hpp"
#include "fk/error.hpp"
#include "fk/examples.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fk;
constexpr double pi = std::numbers::pi;

namespace {
std::vector<ExampleSpec> all_examples(double h)
{
    return {build_example1(h), build_example2(h), build_example3(h), build_example4(h, sine_gordon_profile()),
            build_example4(h, linear_profile()), build_oned_example(h, "sine-gordon", 1, 1)};
}
} // namespace

TEST_CASE("every example solves L u = f")
{
    for (double h : {0.5, 0.25, 0.125})
        for (const ExampleSpec& ex : all_examples(h)) {
            CAPTURE(to_string(ex.id));
            const long n = std::lround(3.0 / h);
            double worst = 0, scale = 1;
            for (long a = -n; a <= n; ++a)
                for (long b = -n; b <= n; ++b) {
                    const double l = oracle::lap(ex.u, h, a, b);
                    worst = std::max(worst, std::abs(l - ex.src.f(a, b, ex.u(a, b))));
                    scale = std::max(scale, std::abs(l));
                }
            CHECK(worst <= 1e-12 * scale);
        }
}

TEST_CASE("Example 1 table agrees with the stencil")
{
    for (double h : {0.5, 0.25}) CHECK(example1_table_mismatch(h, make_window(h, 3.0, 2)) == 0.0);
}

TEST_CASE("Example 3 source at the origin equals L u")
{
    const double h = 0.5;
    ExampleSpec ex = build_example3(h);
    CHECK(ex.src.f(0, 0, 0.0) == doctest::Approx((2 / h) * (std::exp(-h * h) - 1)).epsilon(1e-14));
    CHECK(ex.src.f(0, 0, 0.0) == doctest::Approx(-0.8848).epsilon(1e-4));
    CHECK(ex.src.f(0, 0, 0.0) == doctest::Approx(oracle::lap(ex.u, h, 0, 0)).epsilon(1e-13));
}

TEST_CASE("Example 3 sup constant")
{
    double best = 0;
    for (int i = 0; i <= 500000; ++i) {
        const double t = 5.0 * i / 500000;
        best = std::max(best, t * std::exp(-t * t + 2 * t) * (t * t + 2));
    }
    CHECK(example3_S() >= best);
    CHECK(example3_S() == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("sine-Gordon profile norms")
{
    SemilinearProfile p = sine_gordon_profile();
    double v4 = 0, v1 = 0;
    for (int i = -400000; i <= 400000; ++i) {
        const double t = i * 1e-4, s = 1 / std::cosh(t);
        v4 = std::max(v4, std::abs(2 * s * std::tanh(t) * (6 * s * s - 1)));
        v1 = std::max(v1, 2 * s);
    }
    CHECK(p.norm_v4 == doctest::Approx(v4).epsilon(1e-8));
    CHECK(p.norm_v1 == doctest::Approx(v1).epsilon(1e-12));
    // vtilde'' = sin(vtilde)
    for (double t : {-2.0, 0.3, 1.7}) {
        const double e = 1e-4;
        const double d2 = (p.vtilde(t + e) + p.vtilde(t - e) - 2 * p.vtilde(t)) / (e * e);
        CHECK(d2 == doctest::Approx(std::sin(p.vtilde(t))).epsilon(1e-6));
    }
}

TEST_CASE("Example 4 with the linear profile is Example 1")
{
    const double h = 0.5;
    ExampleSpec a = build_example1(h), b = build_example4(h, linear_profile());
    for (long i = -6; i <= 6; ++i)
        for (long j = -6; j <= 6; ++j) {
            CHECK(a.u(i, j) == b.u(i, j));
            CHECK(a.src.f(i, j, a.u(i, j)) == b.src.f(i, j, b.u(i, j)));
        }
}

TEST_CASE("h constraints")
{
    CHECK_THROWS_AS(build_example1(1.0), Error);
    CHECK_NOTHROW(build_example2(1.0));
    CHECK_THROWS_AS(build_example2(1.5), Error);
    CHECK_THROWS_AS(build_example3(0.0), Error);
    // sine-Gordon: D = (vtilde(h) - pi)/h, threshold min{1, D^(1/3)}
    ExampleSpec e = build_example4(0.5, sine_gordon_profile());
    const double D = example4_d2v(0.5, sine_gordon_profile());
    CHECK(e.h_constraint.hi == doctest::Approx(std::min(1.0, std::cbrt(D))));
    CHECK_THROWS_AS(build_example4(1.0, sine_gordon_profile()), Error);
}

TEST_CASE("one-dimensional factory")
{
    OneDSolution s = build_1d_solution([](double t) { return t * t * t + t; }, [](double y) {
        // invert t^3 + t = y by Newton
        double t = 0;
        for (int i = 0; i < 60; ++i) t -= (t * t * t + t - y) / (3 * t * t + 1);
        return t;
    }, 1, 2, 0.25);
    CHECK(s.theta == doctest::Approx(std::atan2(2.0, 1.0)));
    for (long a = -3; a <= 3; ++a)
        for (long b = -3; b <= 3; ++b) {
            const double l = oracle::lap(s.u, 0.25, a, b);
            CHECK(s.src.f(a, b, s.u(a, b)) == doctest::Approx(l).epsilon(1e-9));
        }
    // decreasing profile flips the direction
    OneDSolution d = build_1d_solution([](double t) { return -t; }, [](double y) { return -y; }, 1, 0, 0.5);
    CHECK(d.theta == pi);
    CHECK_THROWS_AS(build_1d_solution([](double t) { return std::cos(t); }, [](double y) { return std::acos(y); }, 1,
                                      1, 0.5),
                    Error);
    CHECK_THROWS_AS(named_phi("cubic"), Error);
    CHECK_THROWS_AS(build_oned_example(0.5, "tanh", 0, 0), Error);
}

TEST_CASE("analytic bounds hold at admissible h")
{
    for (double h : {0.5, 0.25, 0.125})
        for (const ExampleSpec& ex : {build_example1(h), build_example2(h), build_example3(h),
                                      build_example4(h, sine_gordon_profile())}) {
            CAPTURE(to_string(ex.id));
            CAPTURE(h);
            Field u = sample(ex.u, make_window(h, 10.0, 4));
            AngularData ang = decompose(u);
            KappaOptions o;
            o.theta_inf_plus = ex.theta_inf_plus;
            o.theta_inf_minus = ex.theta_inf_minus;
            o.tails = ex.tails;
            KappaReport k = compute_kappas(u, ang, ex.src, o);
            TheoremReport t = verify_theorem(k, ang, h, TheoremMode::form_plus);
            for (const BoundCheck& b : check_bounds(ex, k, t)) {
                CAPTURE(b.bound.name);
                CHECK(b.ok);
            }
        }
}
