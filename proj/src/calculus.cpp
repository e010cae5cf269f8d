#include "fk/calculus.hpp"
#include "fk/error.hpp"
#include "fk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fk {

namespace {

void require_axis(int j)
{
    if (j != 1 && j != 2) throw Error(ErrorKind::invalid_argument, "axis must be 1 or 2");
}

void require_same(const Field& a, const Field& b)
{
    if (!a.win.same_geometry(b.win)) throw Error(ErrorKind::window_mismatch, "fields live on different windows");
}

int e1(int j) { return j == 1 ? 1 : 0; }
int e2(int j) { return j == 2 ? 1 : 0; }

} // namespace

Field apply_stencil(const Field& u, const Tap* taps, int ntaps, double divisor)
{
    const Window& w = u.win;
    Field out(w);
    const long nx = w.nx(), ny = w.ny();
    std::vector<long> missing(static_cast<std::size_t>(nx), -1);
    par::for_rows(nx, [&](long r) {
        const long k1 = w.s1_min() + r;
        for (long c = 0; c < ny; ++c) {
            const long k2 = w.s2_min() + c;
            double acc = 0.0;
            bool good = true;
            for (int t = 0; t < ntaps; ++t) {
                double x;
                const long a = k1 + taps[t].d1, b = k2 + taps[t].d2;
                if (!u.get(a, b, x)) {
                    good = false;
                    if (!w.stores(a, b) && w.in_core(k1, k2) && missing[static_cast<std::size_t>(r)] < 0)
                        missing[static_cast<std::size_t>(r)] = k2;
                    break;
                }
                acc += taps[t].w * x;
            }
            if (good) {
                const std::size_t i = w.index(k1, k2);
                out.v[i] = acc / divisor;
                out.ok[i] = 1;
            }
        }
    });
    for (long r = 0; r < nx; ++r)
        if (missing[static_cast<std::size_t>(r)] >= 0)
            throw Error(ErrorKind::stencil_out_of_range,
                        "stencil leaves storage at core site (" + std::to_string(w.s1_min() + r) + ","
                            + std::to_string(missing[static_cast<std::size_t>(r)])
                            + "); enlarge the halo or attach a closure");
    return out;
}

Field dplus(const Field& u, int j)
{
    require_axis(j);
    const Tap t[2] = {{e1(j), e2(j), 1.0}, {0, 0, -1.0}};
    return apply_stencil(u, t, 2, u.win.h);
}

Field dminus(const Field& u, int j)
{
    require_axis(j);
    const Tap t[2] = {{0, 0, 1.0}, {-e1(j), -e2(j), -1.0}};
    return apply_stencil(u, t, 2, u.win.h);
}

Field dsigned(const Field& u, int j, Sign s) { return s == Sign::plus ? dplus(u, j) : dminus(u, j); }

Field lap_j(const Field& u, int j)
{
    require_axis(j);
    const Tap t[3] = {{e1(j), e2(j), 1.0}, {-e1(j), -e2(j), 1.0}, {0, 0, -2.0}};
    const double h = u.win.h;
    return apply_stencil(u, t, 3, h * h);
}

Field lap(const Field& u)
{
    const Tap t[5] = {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, 1.0}, {0, -1, 1.0}, {0, 0, -4.0}};
    const double h = u.win.h;
    return apply_stencil(u, t, 5, h * h);
}

Field lap_j_squared(const Field& u, int j)
{
    require_axis(j);
    const int a = e1(j), b = e2(j);
    const Tap t[5] = {{-2 * a, -2 * b, 1.0}, {-a, -b, -4.0}, {0, 0, 6.0}, {a, b, -4.0}, {2 * a, 2 * b, 1.0}};
    const double h = u.win.h;
    return apply_stencil(u, t, 5, h * h * h * h);
}

namespace {
template <class Op>
Field pointwise(const Field& a, const Field& b, Op op)
{
    require_same(a, b);
    Field out(a.win);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        if (a.ok[i] && b.ok[i]) {
            out.v[i] = op(a.v[i], b.v[i]);
            out.ok[i] = 1;
        }
    }
    if (a.closure && b.closure) {
        Closure ca = a.closure, cb = b.closure;
        out.closure = [ca, cb, op](long k1, long k2) { return op(ca(k1, k2), cb(k1, k2)); };
    }
    return out;
}
} // namespace

Field pointwise_product(const Field& a, const Field& b)
{
    return pointwise(a, b, [](double x, double y) { return x * y; });
}
Field pointwise_sum(const Field& a, const Field& b)
{
    return pointwise(a, b, [](double x, double y) { return x + y; });
}
Field pointwise_diff(const Field& a, const Field& b)
{
    return pointwise(a, b, [](double x, double y) { return x - y; });
}

double max_abs(const Field& f)
{
    double m = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        if (f.ok[i]) m = std::max(m, std::abs(f.v[i]));
    return m;
}

double max_abs_core(const Field& f)
{
    const Window& w = f.win;
    double m = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2)
            if (f.valid(k1, k2)) m = std::max(m, std::abs(f.v[w.index(k1, k2)]));
    return m;
}

namespace {

// Max over core sites where both fields are valid of |a - b|.
double core_defect(const Field& a, const Field& b)
{
    const Window& w = a.win;
    double m = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const std::size_t i = w.index(k1, k2);
            if (a.ok[i] && b.ok[i]) m = std::max(m, std::abs(a.v[i] - b.v[i]));
        }
    return m;
}

Field shifted(const Field& f, int d1, int d2)
{
    const Tap t[1] = {{d1, d2, 1.0}};
    return apply_stencil(f, t, 1, 1.0);
}

} // namespace

IdentityCheck check_product_rule(const Field& f, const Field& g, Direction dir)
{
    require_same(f, g);
    require_axis(dir.axis);
    const int s = dir.sign == Sign::plus ? 1 : -1;
    const int d1 = s * e1(dir.axis), d2 = s * e2(dir.axis);
    Field fg = pointwise_product(f, g);
    Field lhs = dsigned(fg, dir.axis, dir.sign);
    Field df = dsigned(f, dir.axis, dir.sign);
    Field dg = dsigned(g, dir.axis, dir.sign);
    Field fs = shifted(f, d1, d2), gs = shifted(g, d1, d2);
    const Window& w = f.win;
    Field rhs(w);
    for (std::size_t i = 0; i < rhs.v.size(); ++i) {
        if (fs.ok[i] && gs.ok[i] && df.ok[i] && dg.ok[i] && f.ok[i] && g.ok[i]) {
            rhs.v[i] = (fs.v[i] + f.v[i]) / 2 * dg.v[i] + (gs.v[i] + g.v[i]) / 2 * df.v[i];
            rhs.ok[i] = 1;
        }
    }
    return {core_defect(lhs, rhs), max_abs(f) * max_abs(g) / w.h};
}

IdentityCheck check_product_laplacian(const Field& f, const Field& g)
{
    require_same(f, g);
    const Window& w = f.win;
    Field lhs = lap(pointwise_product(f, g));
    Field lf = lap(f), lg = lap(g);
    Field rhs(w);
    Field dp[2][2], dq[2][2];
    for (int j = 1; j <= 2; ++j) {
        dp[j - 1][0] = dplus(f, j);
        dp[j - 1][1] = dminus(f, j);
        dq[j - 1][0] = dplus(g, j);
        dq[j - 1][1] = dminus(g, j);
    }
    for (std::size_t i = 0; i < rhs.v.size(); ++i) {
        bool good = lf.ok[i] && lg.ok[i] && f.ok[i] && g.ok[i];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) good = good && dp[a][b].ok[i] && dq[a][b].ok[i];
        if (!good) continue;
        double x = lf.v[i] * g.v[i] + lg.v[i] * f.v[i];
        for (int a = 0; a < 2; ++a) x += dp[a][0].v[i] * dq[a][0].v[i] + dp[a][1].v[i] * dq[a][1].v[i];
        rhs.v[i] = x;
        rhs.ok[i] = 1;
    }
    return {core_defect(lhs, rhs), max_abs(f) * max_abs(g) / (w.h * w.h)};
}

IdentityCheck check_iterated_increments(const Field& f)
{
    const Window& w = f.win;
    double worst = 0.0;
    Field l1 = lap_j(f, 1), l2 = lap_j(f, 2);
    for (int j = 1; j <= 2; ++j) {
        Field dp = dplus(f, j), dm = dminus(f, j);
        Field lj = j == 1 ? l1 : l2;
        worst = std::max(worst, core_defect(dplus(dp, j), shifted(lj, e1(j), e2(j))));
        worst = std::max(worst, core_defect(dminus(dm, j), shifted(lj, -e1(j), -e2(j))));
        worst = std::max(worst, core_defect(lj, dplus(dm, j)));
        worst = std::max(worst, core_defect(lj, dminus(dp, j)));
    }
    worst = std::max(worst, core_defect(lap(f), pointwise_sum(l1, l2)));
    return {worst, max_abs(f) / (w.h * w.h)};
}

IdentityCheck sum_by_parts_residual(const Field& f, const Field& g, int j, Sign variant)
{
    require_same(f, g);
    require_axis(j);
    const Window& w = f.win;
    // strict interior: core shrunk by one ring
    std::size_t support = 0;
    for (long k1 = w.s1_min(); k1 <= w.s1_max(); ++k1)
        for (long k2 = w.s2_min(); k2 <= w.s2_max(); ++k2) {
            const std::size_t i = w.index(k1, k2);
            const bool inner = k1 > w.i1_min && k1 < w.i1_max && k2 > w.i2_min && k2 < w.i2_max;
            const bool nz = !g.ok[i] || g.v[i] != 0.0;
            if (nz && !inner)
                throw Error(ErrorKind::support_violation,
                            "g is nonzero or undefined at (" + std::to_string(k1) + "," + std::to_string(k2)
                                + ") outside the strict interior");
            if (nz) ++support;
        }
    const Sign other = variant == Sign::plus ? Sign::minus : Sign::plus;
    Field df = dsigned(f, j, variant);
    Field dg = dsigned(g, j, other);
    double a = 0.0, b = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const std::size_t i = w.index(k1, k2);
            if (g.v[i] != 0.0) a += df.at(k1, k2) * g.v[i];
            if (dg.at(k1, k2) != 0.0) b += f.at(k1, k2) * dg.v[i];
        }
    const double n = static_cast<double>(std::max<std::size_t>(support, 1)) * 2.0;
    return {std::abs(a + b), n * max_abs(f) * max_abs(g) / w.h};
}

} // namespace fk
