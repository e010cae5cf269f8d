#include "fk/calculus.hpp"
#include "fk/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fk;

namespace {

Field poly(double h, double r, int halo, double (*p)(double, double))
{
    return sample([h, p](long a, long b) { return p(h * a, h * b); }, make_window(h, r, halo));
}

Field random_field(std::mt19937_64& rng, const Window& w)
{
    std::uniform_real_distribution<double> U(-1, 1);
    Field f(w);
    for (long a = w.s1_min(); a <= w.s1_max(); ++a)
        for (long b = w.s2_min(); b <= w.s2_max(); ++b) f.set(a, b, U(rng));
    return f;
}

} // namespace

TEST_CASE("increments of polynomials match hand-computed differences")
{
    const double h = 0.25;
    Field u = poly(h, 1.0, 2, [](double x, double y) { return x * x + 3 * y; });
    Field dp = dplus(u, 1), dm = dminus(u, 1), d2 = dplus(u, 2);
    for (long a = -4; a <= 4; ++a) {
        CHECK(dp.at(a, 0) == doctest::Approx(2 * h * a + h).epsilon(1e-14));
        CHECK(dm.at(a, 0) == doctest::Approx(2 * h * a - h).epsilon(1e-14));
        CHECK(d2.at(a, 1) == doctest::Approx(3.0).epsilon(1e-14));
    }
}

TEST_CASE("Laplacian of a quadratic is constant; the squared second difference of t^4 is 24")
{
    const double h = 0.5;
    Field u = poly(h, 2.0, 2, [](double x, double y) { return x * x + y * y - x * y; });
    Field l = lap(u);
    for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b) CHECK(l.at(a, b) == doctest::Approx(4.0).epsilon(1e-13));
    Field q = poly(h, 2.0, 2, [](double x, double) { return x * x * x * x; });
    Field l2 = lap_j_squared(q, 1);
    CHECK(l2.at(0, 0) == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(l2.at(3, 1) == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(max_abs_core(lap_j_squared(q, 2)) == 0.0);
}

TEST_CASE("stencils report invalid sites and out-of-range core sites")
{
    Field u = sample([](long a, long b) { return double(a + b); }, make_window(1.0, 2.0, 0));
    u.closure = nullptr;
    CHECK_THROWS_AS(dplus(u, 1), Error);
    Field v = with_halo(u, 1);
    Field d = dplus(v, 1);
    CHECK(d.valid(1, 0));
    CHECK_FALSE(d.valid(2, 0)); // halo site, right neighbour not stored
    CHECK_THROWS_AS(dplus(v, 3), Error);
}

TEST_CASE("pointwise ops reject mismatched windows")
{
    Field a = sample([](long, long) { return 1.0; }, make_window(1.0, 2.0, 0));
    Field b = sample([](long, long) { return 1.0; }, make_window(1.0, 3.0, 0));
    try {
        pointwise_sum(a, b);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::window_mismatch);
    }
}

TEST_CASE("exactness identities on random fields")
{
    std::mt19937_64 rng(7);
    const Window w = make_window(0.3, 4 * 0.3, 2); // 9 x 9 core
    for (int rep = 0; rep < 20; ++rep) {
        Field f = random_field(rng, w), g = random_field(rng, w);
        for (int j = 1; j <= 2; ++j)
            for (Sign s : {Sign::plus, Sign::minus}) CHECK(check_product_rule(f, g, {j, s}).within(1e-12));
        CHECK(check_product_laplacian(f, g).within(1e-12));
        CHECK(check_iterated_increments(f).within(1e-12));
        // compactly supported g: zero on the outer ring of the core and the halo
        Field gc(w);
        for (long a = w.s1_min(); a <= w.s1_max(); ++a)
            for (long b = w.s2_min(); b <= w.s2_max(); ++b)
                gc.set(a, b, (std::abs(a) < 4 && std::abs(b) < 4) ? g.at(a, b) : 0.0);
        for (int j = 1; j <= 2; ++j)
            for (Sign s : {Sign::plus, Sign::minus}) CHECK(sum_by_parts_residual(f, gc, j, s).within(1e-12));
    }
}

TEST_CASE("product rule residual is not trivially zero for a wrong formula")
{
    // sanity: D+(fg) differs from f D+g + g D+f by h D+f D+g
    const double h = 0.5;
    Field f = poly(h, 1.0, 1, [](double x, double) { return x; });
    Field g = poly(h, 1.0, 1, [](double x, double) { return x; });
    Field fg = pointwise_product(f, g);
    Field naive = pointwise_sum(pointwise_product(f, dplus(g, 1)), pointwise_product(g, dplus(f, 1)));
    Field diff = pointwise_diff(dplus(fg, 1), naive);
    CHECK(diff.at(0, 0) == doctest::Approx(h).epsilon(1e-14));
    CHECK(check_product_rule(f, g, {1, Sign::plus}).within(1e-12));
}

TEST_CASE("summation by parts requires compact support")
{
    std::mt19937_64 rng(3);
    const Window w = make_window(1.0, 4.0, 1);
    Field f = random_field(rng, w), g = random_field(rng, w);
    try {
        sum_by_parts_residual(f, g, 1, Sign::plus);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::support_violation);
    }
}
