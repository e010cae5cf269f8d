#include "fk/angular.hpp"
#include "fk/parallel.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace fk {

double principal_angle(double x, double y)
{
    double t = std::atan2(y, x);
    if (t <= -std::numbers::pi) t = std::numbers::pi;
    return t;
}

namespace {

void polar(const Field& d1, const Field& d2, Field& rho, Field& theta, double& k1, long& zeros)
{
    const Window& w = d1.win;
    rho = Field(w);
    theta = Field(w);
    const long nx = w.nx(), ny = w.ny();
    std::vector<long> zc(static_cast<std::size_t>(nx), 0);
    k1 = par::ordered_max(nx, [&](long r) {
        double m = 0.0;
        const long a = w.s1_min() + r;
        for (long c = 0; c < ny; ++c) {
            const long b = w.s2_min() + c;
            const std::size_t i = w.index(a, b);
            if (!d1.ok[i] || !d2.ok[i]) continue;
            const double x = d1.v[i], y = d2.v[i];
            if (w.in_core(a, b)) m = std::max(m, std::max(std::abs(x), std::abs(y)));
            const double r2 = x * x + y * y;
            if (r2 == 0.0) {
                ++zc[static_cast<std::size_t>(r)];
                continue;
            }
            rho.v[i] = std::sqrt(r2);
            rho.ok[i] = 1;
            theta.v[i] = principal_angle(x, y);
            theta.ok[i] = 1;
        }
        return m;
    });
    zeros = 0;
    for (long z : zc) zeros += z;
}

} // namespace

AngularData decompose(const Field& u)
{
    AngularData a;
    polar(dplus(u, 1), dplus(u, 2), a.rho_plus, a.theta_plus, a.kappa1_plus, a.zero_plus);
    polar(dminus(u, 1), dminus(u, 2), a.rho_minus, a.theta_minus, a.kappa1_minus, a.zero_minus);
    return a;
}

AssumptionReport check_assumptions(const Field& u)
{
    AssumptionReport rep;
    const Window& w = u.win;
    auto note = [](AssumptionCheck& c, long k1, long k2) {
        if (c.pass) c.first = SiteIndex{k1, k2};
        c.pass = false;
        ++c.violations;
    };
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double c = u.at(k1, k2);
            const double p1 = u.at(k1 + 1, k2) - c, p2 = u.at(k1, k2 + 1) - c;
            const double m1 = c - u.at(k1 - 1, k2), m2 = c - u.at(k1, k2 - 1);
            if (!(p1 * p1 + p2 * p2 > 0.0)) note(rep.grad_plus, k1, k2);
            if (!(m1 * m1 + m2 * m2 > 0.0)) note(rep.grad_minus, k1, k2);
            if (!(u.at(k1, k2 + 1) > c)) note(rep.mono, k1, k2);
        }
    return rep;
}

void write_angular_csv(std::ostream& os, const AngularData& a)
{
    const Window& w = a.rho_plus.win;
    os << "# h=" << fmt17(w.h) << "\n";
    os << "k1,k2,rho_plus,theta_plus,rho_minus,theta_minus,valid\n";
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const std::size_t i = w.index(k1, k2);
            const bool vp = a.rho_plus.ok[i], vm = a.rho_minus.ok[i];
            os << k1 << ',' << k2 << ',' << (vp ? fmt17(a.rho_plus.v[i]) : "nan") << ','
               << (vp ? fmt17(a.theta_plus.v[i]) : "nan") << ',' << (vm ? fmt17(a.rho_minus.v[i]) : "nan") << ','
               << (vm ? fmt17(a.theta_minus.v[i]) : "nan") << ',' << ((vp && vm) ? 1 : 0) << '\n';
        }
}

} // namespace fk
