#include "fk/error.hpp"
#include "fk/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace fk;

TEST_CASE("make_window counts sites with a rounding guard")
{
    Window w = make_window(0.1, 1.0, 2);
    CHECK(w.i1_min == -10);
    CHECK(w.i2_max == 10);
    CHECK(w.nx() == 25);
    CHECK(w.size() == 625u);
    CHECK(make_window(0.5, 10, 0).i1_max == 20);
    CHECK_THROWS_AS(make_window(0.0, 1.0, 1), Error);
    CHECK_THROWS_AS(make_window(0.5, -1.0, 1), Error);
    CHECK_THROWS_AS(make_window(0.5, 1.0, -1), Error);
}

TEST_CASE("index is row-major in k1 and covers storage exactly once")
{
    Window w = make_window(1.0, 2.0, 1);
    std::vector<int> hit(w.size(), 0);
    for (long a = w.s1_min(); a <= w.s1_max(); ++a)
        for (long b = w.s2_min(); b <= w.s2_max(); ++b) ++hit[w.index(a, b)];
    for (int x : hit) CHECK(x == 1);
    CHECK(w.index(w.s1_min(), w.s2_min() + 1) == 1u);
}

TEST_CASE("sample keeps the closure and get falls back to it outside storage")
{
    Field f = sample([](long a, long b) { return 10.0 * a + b; }, make_window(1.0, 1.0, 0));
    double x = 0;
    CHECK(f.get(1, -1, x));
    CHECK(x == 9.0);
    CHECK(f.get(5, 5, x));
    CHECK(x == 55.0);
    CHECK(f.valid_count() == 9u);
    f.closure = nullptr;
    CHECK_FALSE(f.get(5, 5, x));
    try {
        f.at(5, 5);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::stencil_out_of_range);
    }
}

TEST_CASE("sampling failure names the site")
{
    auto bad = [](long a, long b) { return (a == 1 && b == -1) ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
    try {
        sample(bad, make_window(1.0, 2.0, 0));
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::sampling_failure);
        CHECK(std::string(e.what()).find("(1,-1)") != std::string::npos);
    }
}

TEST_CASE("with_halo shrinks the core over the same storage")
{
    Field f = sample([](long a, long) { return double(a); }, make_window(1.0, 3.0, 1));
    Field g = with_halo(f, 2);
    CHECK(g.win.i1_min == -1);
    CHECK(g.win.halo == 3);
    CHECK(g.win.s1_min() == f.win.s1_min());
    CHECK(g.win.index(0, 0) == f.win.index(0, 0));
    CHECK_THROWS_AS(with_halo(f, 4), Error);
}

TEST_CASE("CSV round trip is exact")
{
    Field f = sample([](long a, long b) { return std::sin(0.3 * a) / 3.0 + 1e-17 * b + std::exp(0.1 * b); },
                     make_window(0.25, 1.0, 1));
    std::ostringstream os;
    write_field_csv(os, f);
    std::istringstream is(os.str());
    Field g = read_field_csv(is);
    CHECK(g.win.s1_min() == f.win.s1_min());
    CHECK(g.win.s2_max() == f.win.s2_max());
    CHECK(g.win.h == f.win.h);
    for (long a = f.win.s1_min(); a <= f.win.s1_max(); ++a)
        for (long b = f.win.s2_min(); b <= f.win.s2_max(); ++b) CHECK(g.at(a, b) == f.at(a, b));
    std::ostringstream os2;
    write_field_csv(os2, g);
    CHECK(os2.str() == os.str());
}

TEST_CASE("fmt17 round-trips doubles")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
        CHECK(std::stod(fmt17(x)) == x);
}
