#include "fk/diagnostics.hpp"
#include "fk/error.hpp"
#include "fk/examples.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace fk;
constexpr double pi = std::numbers::pi;

namespace {

struct Run {
    ExampleSpec ex;
    Field u;
    AngularData ang;
    KappaReport k;
};

Run run(const ExampleSpec& ex, double radius)
{
    Run r{ex, sample(ex.u, make_window(ex.h, radius, 4)), {}, {}};
    r.ang = decompose(r.u);
    KappaOptions o;
    o.theta_inf_plus = ex.theta_inf_plus;
    o.theta_inf_minus = ex.theta_inf_minus;
    o.tails = ex.tails;
    r.k = compute_kappas(r.u, r.ang, ex.src, o);
    return r;
}

void compare_with_oracle(const Run& r, int s)
{
    const long n = r.u.win.i1_max;
    const oracle::Sums o = oracle::sums(r.ex.u, r.ex.h, n, s > 0 ? r.ex.theta_inf_plus : r.ex.theta_inf_minus, s);
    const KappaFamily& f = s > 0 ? r.k.plus : *r.k.minus;
    const double k0 = oracle::kappa0(r.ex.u, r.ex.src.f, s > 0 ? r.ex.src.Lf_plus : r.ex.src.Lf_minus, r.ex.h, n, s);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(b)); };
    CHECK(close(f.kappa[0], k0));
    CHECK(close(f.lhs, o.lhs));
    CHECK(close(f.kappa[2], o.k2));
    CHECK(close(f.kappa[3], o.k3));
    CHECK(close(f.kappa[4], o.k4));
    CHECK(close(f.kappa[5], k0 * o.rho_dev));
    CHECK(close(f.kappa[6], o.k6));
    CHECK(close(f.kappa[7], o.k7));
}

} // namespace

TEST_CASE("kappa sums agree with the brute-force oracle on every example")
{
    for (double h : {0.5, 0.25}) {
        for (const ExampleSpec& ex : {build_example1(h), build_example2(h), build_example3(h),
                                      build_example4(h, sine_gordon_profile()), build_oned_example(h, "tanh", 1, 1)}) {
            CAPTURE(to_string(ex.id));
            CAPTURE(h);
            Run r = run(ex, 3.0);
            compare_with_oracle(r, +1);
            compare_with_oracle(r, -1);
        }
    }
}

TEST_CASE("Example 1 closed forms for kappa2 and kappa3")
{
    for (double h : {0.5, 0.25, 0.125}) {
        Run r = run(build_example1(h), 10.0);
        CHECK(r.k.plus.kappa[2] == doctest::Approx(oracle::ex1_kappa2(h)).epsilon(1e-12));
        CHECK(r.k.plus.kappa[3] == doctest::Approx(oracle::ex1_kappa3(h)).epsilon(1e-12));
        CHECK(r.k.plus.kappa[0] == doctest::Approx(5.0).epsilon(1e-12));
        for (int m = 2; m < 8; ++m) CHECK(r.k.plus.tail[m] == 0.0);
    }
}

TEST_CASE("Example 1 kappa5, kappa6 and kappa7 follow the hand-derived values")
{
    for (double h : {0.5, 0.25}) {
        Run r = run(build_example1(h), 10.0);
        const double h3 = h * h * h, d = oracle::ex1_delta(h), s = std::sqrt(1 + h3 * h3) - 1;
        CHECK(r.k.plus.kappa[5] == doctest::Approx(5 * std::sqrt(1 + h3 * h3) * d).epsilon(1e-12));
        CHECK(r.k.plus.kappa[6] == doctest::Approx((12 + 2 * h3 + 15 * h3 * h3) * d * d / h3).epsilon(1e-12));
        CHECK(r.k.plus.kappa[7] == doctest::Approx((h3 * h + 2 * h * s + 4 * s * s / (h * h)) * d * d / h).epsilon(1e-12));
    }
}

TEST_CASE("tail model: domain, compact and decay rates")
{
    Window w = make_window(1.0, 10.0, 0);
    CHECK(tail_estimate(w, {{Decay::domain, 0}, {Decay::domain, 0}}, 1, 1, 1, 1) == 0.0);
    CHECK(tail_estimate(w, {{Decay::compact, 0}, {Decay::compact, 0}}, 0, 0, 0, 0) == 0.0);
    CHECK(std::isinf(tail_estimate(w, {{Decay::compact, 0}, {Decay::compact, 0}}, 0, 1e-30, 0, 0)));
    CHECK(std::isinf(tail_estimate(w, {{Decay::unknown, 0}, {Decay::domain, 0}}, 1, 1, 0, 0)));
    // power 3 along k1 only: edge * n/(p-1) per side
    CHECK(tail_estimate(w, {{Decay::power, 3}, {Decay::domain, 0}}, 2, 1, 0, 0) == doctest::Approx(3 * 10 / 2.0));
    // gauss: sum_{m>n} e^{-a m^2} / e^{-a n^2} <= e^{-a(2n+1)} / (1 - e^{-2an})
    const double a = 0.02;
    double exact = 0;
    for (long m = 11; m < 2000; ++m) exact += std::exp(-a * (m * m - 100.0));
    const double est = tail_estimate(w, {{Decay::gauss, a}, {Decay::domain, 0}}, 1, 0, 0, 0);
    CHECK(est >= exact);
    CHECK(est <= 1.5 * exact);
}

TEST_CASE("theorem verdicts")
{
    KappaReport k;
    k.plus.kappa = {0, 0, 1, 0, 0, 0, 0, 0};
    k.plus.lhs = 1.0;
    Field u = sample([](long, long b) { return double(b); }, make_window(1.0, 2.0, 4));
    AngularData ang = decompose(u);
    CHECK(theorem_constant(k.plus.kappa) == 4.0);
    CHECK(verify_theorem(k, ang, 0.5, TheoremMode::form_plus).verdict == Verdict::holds); // 1 <= 2
    CHECK(verify_theorem(k, ang, 0.2, TheoremMode::form_plus).verdict == Verdict::violated);
    k.plus.lhs_tail = 1.5;
    CHECK(verify_theorem(k, ang, 0.5, TheoremMode::form_plus).verdict == Verdict::inconclusive_truncation);
    CHECK_THROWS_AS(verify_theorem(k, ang, 0.5, TheoremMode::tutta), Error);
    const double e2 = std::exp(2 * pi);
    CHECK(theorem_constant({9, 9, 1, 1, 1, 1, 1, 1}) == doctest::Approx(4 * (1 + 2 * e2 + 2 * e2 + 2 + 1 + 1)));
}

TEST_CASE("tutta mode adds both families")
{
    Run r = run(build_example1(0.5), 5.0);
    TheoremReport t = verify_theorem(r.k, r.ang, 0.5, TheoremMode::tutta);
    REQUIRE(t.lhs_tutta);
    CHECK(*t.lhs_tutta == doctest::Approx(r.k.plus.lhs + r.k.minus->lhs));
    std::array<double, 8> s;
    for (int m = 0; m < 8; ++m) s[m] = r.k.plus.kappa[m] + r.k.minus->kappa[m];
    CHECK(t.constant_C == doctest::Approx(theorem_constant(s)));
    CHECK(t.verdict == Verdict::holds);
    CHECK(!t.worst_sites.empty());
}

TEST_CASE("remainder bound holds at every valid site and the identity is computed independently")
{
    for (double h : {0.5, 0.25})
        for (const ExampleSpec& ex : {build_example1(h), build_example2(h), build_example3(h),
                                      build_example4(h, sine_gordon_profile())}) {
            Run r = run(ex, 4.0);
            RemainderReport rep = linearized_residual(r.u, ex.src, r.ang);
            CHECK(rep.violations == 0);
            CHECK(rep.evaluated > 0);
            CHECK(rep.equation_residual <= 1e-10);
        }
    // eps recomputed from rho and theta at one site
    Run r = run(build_example1(0.5), 3.0);
    RemainderReport rep = linearized_residual(r.u, r.ex.src, r.ang);
    const auto& u = r.ex.u;
    const double h = 0.5;
    double eps = 0;
    for (int j = 1; j <= 2; ++j) {
        auto g = [&](long a, long b, int s) {
            const double rr = oracle::modulus(u, h, a, b, 1);
            const long c = a + s * (j == 1), d = b + s * (j == 2);
            const double dt = s > 0 ? (oracle::angle(u, h, c, d, 1) - oracle::angle(u, h, a, b, 1)) / h
                                    : (oracle::angle(u, h, a, b, 1) - oracle::angle(u, h, c, d, 1)) / h;
            return rr * rr * dt;
        };
        const long ea = j == 1, eb = j == 2;
        eps += (g(ea, eb, 1) - g(0, 0, 1)) / h + (g(0, 0, -1) - g(-ea, -eb, -1)) / h;
    }
    bool found = false;
    for (const SiteRemainder& s : rep.sites)
        if (s.site.k1 == 0 && s.site.k2 == 0) {
            found = true;
            CHECK(s.eps == doctest::Approx(eps).epsilon(1e-12));
        }
    CHECK(found);
}

TEST_CASE("remainder refuses a field that does not solve the equation")
{
    Run r = run(build_example1(0.5), 3.0);
    SourceTerm wrong = r.ex.src;
    wrong.f = [](long, long, double) { return 1.0; };
    try {
        linearized_residual(r.u, wrong, r.ang);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::equation_residual_too_large);
    }
}

TEST_CASE("kappa0 signals a non-finite source")
{
    Field u = sample([](long, long b) { return double(b); }, make_window(1.0, 2.0, 2));
    SourceTerm s;
    s.f = [](long a, long, double) { return a == 1 ? std::numeric_limits<double>::infinity() : 0.0; };
    s.Lf_plus = [](long, long, double) { return 0.0; };
    CHECK_THROWS_AS(kappa0(u, s, Sign::plus), Error);
}
