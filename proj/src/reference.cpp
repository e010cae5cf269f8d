#include "fk/reference.hpp"

#include <algorithm>
#include <cmath>

namespace fk::ref {

Field lap(const Field& u)
{
    const Window& w = u.win;
    Field out(w);
    const double h2 = w.h * w.h;
    for (long a = w.s1_min(); a <= w.s1_max(); ++a)
        for (long b = w.s2_min(); b <= w.s2_max(); ++b) {
            double c, e, wst, n, s;
            if (!u.get(a, b, c) || !u.get(a + 1, b, e) || !u.get(a - 1, b, wst) || !u.get(a, b + 1, n)
                || !u.get(a, b - 1, s))
                continue;
            out.set(a, b, (e + wst - 2.0 * c) / h2 + (n + s - 2.0 * c) / h2);
        }
    return out;
}

AngularData decompose(const Field& u)
{
    const Window& w = u.win;
    const double h = w.h;
    AngularData a;
    a.rho_plus = a.theta_plus = a.rho_minus = a.theta_minus = Field(w);
    for (long k1 = w.s1_min(); k1 <= w.s1_max(); ++k1)
        for (long k2 = w.s2_min(); k2 <= w.s2_max(); ++k2) {
            double c, e, wst, n, s;
            if (!u.get(k1, k2, c)) continue;
            for (int pass = 0; pass < 2; ++pass) {
                double x, y;
                if (pass == 0) {
                    if (!u.get(k1 + 1, k2, e) || !u.get(k1, k2 + 1, n)) continue;
                    x = (e - c) / h;
                    y = (n - c) / h;
                } else {
                    if (!u.get(k1 - 1, k2, wst) || !u.get(k1, k2 - 1, s)) continue;
                    x = (c - wst) / h;
                    y = (c - s) / h;
                }
                double& k = pass == 0 ? a.kappa1_plus : a.kappa1_minus;
                if (w.in_core(k1, k2)) k = std::max({k, std::abs(x), std::abs(y)});
                if (x == 0.0 && y == 0.0) {
                    ++(pass == 0 ? a.zero_plus : a.zero_minus);
                    continue;
                }
                (pass == 0 ? a.rho_plus : a.rho_minus).set(k1, k2, std::sqrt(x * x + y * y));
                (pass == 0 ? a.theta_plus : a.theta_minus).set(k1, k2, principal_angle(x, y));
            }
        }
    return a;
}

std::array<double, q_count> angular_totals(const Field& rho, const Field& th, double tinf)
{
    const Window& w = rho.win;
    const double h = w.h;
    std::array<double, q_count> tot{};
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            double t[2][5], r[2][3];
            bool good = true;
            for (int j = 0; j < 2 && good; ++j)
                for (int d = -2; d <= 2 && good; ++d) {
                    const long a = k1 + (j == 0 ? d : 0), b = k2 + (j == 1 ? d : 0);
                    good = th.get(a, b, t[j][d + 2]);
                    if (good && d >= -1 && d <= 1) good = rho.get(a, b, r[j][d + 1]);
                }
            if (!good) continue;
            const double r0 = r[0][1], dev = std::abs(t[0][2] - tinf);
            for (int j = 0; j < 2; ++j) {
                const double* T = t[j];
                const double* R = r[j];
                const double dp = (T[3] - T[2]) / h, dm = (T[2] - T[1]) / h;
                const double l = (T[3] + T[1] - 2.0 * T[2]) / (h * h);
                const double ddp = (T[4] - 2.0 * T[3] + T[2]) / (h * h);
                const double ddm = (T[2] - 2.0 * T[1] + T[0]) / (h * h);
                const double ll = (T[0] - 4.0 * T[1] + 6.0 * T[2] - 4.0 * T[3] + T[4]) / (h * h * h * h);
                const double rp = (R[2] - R[1]) / h, rm = (R[1] - R[0]) / h;
                const double r2p = (R[2] * R[2] - R[1] * R[1]) / h, r2m = (R[1] * R[1] - R[0] * R[0]) / h;
                tot[q_lhs] += r0 * r0 * (dp * dp + dm * dm);
                tot[q_k2] += r0 * r0 * (std::abs(dp) + std::abs(dm)) * std::abs(l);
                tot[q_k3] += r0 * r0 * (std::pow(std::abs(dp), 3) + std::pow(std::abs(dm), 3)) * dev;
                tot[q_k4] += r0 * (std::abs(rp) * dp * dp + std::abs(rm) * dm * dm) * dev;
                tot[q_k6] += (std::abs(r2p * ddp) + std::abs(r2m * ddm) + h * r0 * r0 * std::abs(ll)) * dev;
                tot[q_k7] += (rp * rp * std::abs(dp) + rm * rm * std::abs(dm)) * dev;
            }
            tot[q_rho_dev] += r0 * dev;
        }
    return tot;
}

double kappa0(const Field& u, const SourceTerm& src, Sign variant)
{
    const Window& w = u.win;
    const SiteValueRule& L = (variant == Sign::minus && src.Lf_minus) ? src.Lf_minus : src.Lf_plus;
    const int s = variant == Sign::plus ? 1 : -1;
    double m = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double ui = u.at(k1, k2), fi = src.f(k1, k2, ui), li = L ? L(k1, k2, ui) : 0.0;
            double acc = 0.0;
            for (int j = 0; j < 2; ++j) {
                const long a = k1 + s * (j == 0), b = k2 + s * (j == 1);
                const double un = u.at(a, b);
                acc += std::abs(s * (src.f(a, b, un) - fi) - li * s * (un - ui));
            }
            m = std::max(m, acc / (w.h * w.h));
        }
    return m;
}

} // namespace fk::ref
