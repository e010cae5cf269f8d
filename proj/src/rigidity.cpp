#include "fk/rigidity.hpp"
#include "fk/diagnostics.hpp"
#include "fk/error.hpp"
#include "fk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace fk {

VanishingResult check_vanishing(const AngularData& ang)
{
    const Window& w = ang.rho_plus.win;
    std::string bad;
    long nbad = 0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2)
            if (!ang.rho_plus.valid(k1, k2) || !ang.rho_minus.valid(k1, k2)) {
                if (nbad < 8) bad += " (" + std::to_string(k1) + "," + std::to_string(k2) + ")";
                ++nbad;
            }
    if (nbad)
        throw Error(ErrorKind::hypothesis_violation,
                    std::to_string(nbad) + " site(s) with vanishing increment:" + bad);
    const TailModels none = TailModels::uniform({{Decay::domain, 0}, {Decay::domain, 0}});
    AngularSums sp = angular_sums(ang.rho_plus, ang.theta_plus, 0.0, none);
    AngularSums sm = angular_sums(ang.rho_minus, ang.theta_minus, 0.0, none);
    if (sp.skipped || sm.skipped)
        throw Error(ErrorKind::hypothesis_violation, "angle undefined next to a core site");
    VanishingResult r;
    r.residual = sp.total[q_lhs] + sm.total[q_lhs];
    const double h = w.h;
    double s = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double a = ang.rho_plus.at(k1, k2), b = ang.rho_minus.at(k1, k2);
            s += a * a + b * b;
        }
    r.scale = s * (std::numbers::pi / h) * (std::numbers::pi / h);
    r.is_zero = r.residual <= 1e-20 * r.scale;
    return r;
}

Ratios extract_ratios(const Field& u)
{
    const Window& w = u.win;
    Ratios r;
    const long c1 = w.i1_min + (w.i1_max - w.i1_min) / 2, c2 = w.i2_min + (w.i2_max - w.i2_min) / 2;
    r.reference = {c1, c2};
    auto ratio = [&](long k1, long k2, int s) {
        const double ui = u.at(k1, k2);
        const double den = u.at(k1, k2 + s) - ui;
        if (den == 0.0)
            throw Error(ErrorKind::hypothesis_violation,
                        "D2 increment vanishes at (" + std::to_string(k1) + "," + std::to_string(k2) + ")");
        return (u.at(k1 + s, k2) - ui) / den;
    };
    r.c_plus = ratio(c1, c2, 1);
    r.c_minus = ratio(c1, c2, -1);
    double e = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            e = std::max(e, std::abs(ratio(k1, k2, 1) - r.c_plus));
            e = std::max(e, std::abs(ratio(k1, k2, -1) - r.c_minus));
        }
    r.constancy_error = e;
    return r;
}

double Profile1D::at(long m) const
{
    if (m < m_min || m > m_max())
        throw Error(ErrorKind::invalid_argument, "profile does not cover m = " + std::to_string(m));
    return values[static_cast<std::size_t>(m - m_min)];
}

std::vector<double> pascal_row(long n)
{
    if (n < 0) throw Error(ErrorKind::invalid_argument, "negative binomial order");
    std::vector<double> row{1.0};
    for (long k = 1; k <= n; ++k) {
        std::vector<double> next(static_cast<std::size_t>(k + 1));
        next[0] = next[static_cast<std::size_t>(k)] = 1.0;
        for (long j = 1; j < k; ++j)
            next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
        row.swap(next);
    }
    return row;
}

std::vector<double> binomial_weights(long n, double c)
{
    if (n < 0) throw Error(ErrorKind::invalid_argument, "negative binomial order");
    std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);
    if (n <= 40 || !(c > 0.0 && c < 1.0)) {
        const std::vector<double> b = pascal_row(n);
        for (long j = 0; j <= n; ++j)
            w[static_cast<std::size_t>(j)] =
                b[static_cast<std::size_t>(j)] * std::pow(c, static_cast<double>(j)) * std::pow(1.0 - c, static_cast<double>(n - j));
        return w;
    }
    const double lc = std::log(c), l1c = std::log1p(-c), ln = std::lgamma(static_cast<double>(n) + 1.0);
    for (long j = 0; j <= n; ++j) {
        const double lw = ln - std::lgamma(static_cast<double>(j) + 1.0) - std::lgamma(static_cast<double>(n - j) + 1.0)
                        + static_cast<double>(j) * lc + static_cast<double>(n - j) * l1c;
        w[static_cast<std::size_t>(j)] = std::exp(lw);
    }
    return w;
}

Field reconstruct_1d(const Profile1D& p, const ReconstructOptions& o, bool* flag)
{
    if (o.k_min > o.k_max || o.m_min > o.m_max) throw Error(ErrorKind::invalid_argument, "empty reconstruction range");
    const long kneg = std::max(0L, -o.k_min), kpos = std::max(0L, o.k_max);
    if (o.m_min - kneg < p.m_min || o.m_max + kpos > p.m_max())
        throw Error(ErrorKind::invalid_argument, "insufficient profile range");
    Window w;
    w.h = p.h;
    w.i1_min = o.k_min;
    w.i1_max = o.k_max;
    w.i2_min = o.m_min;
    w.i2_max = o.m_max;
    w.halo = 0;
    Field out(w);
    if (flag) *flag = std::max(kneg, kpos) > 60;
    par::for_rows(w.nx(), [&](long r) {
        const long k = o.k_min + r;
        const long n = k < 0 ? -k : k;
        const int s = k > 0 ? 1 : (k < 0 ? -1 : 0);
        const double c = k > 0 ? p.c_plus : (k < 0 ? p.c_minus : 1.0);
        const std::vector<double> wt = binomial_weights(n, c);
        for (long m = o.m_min; m <= o.m_max; ++m) {
            double acc = 0.0;
            for (long j = 0; j <= n; ++j) acc += wt[static_cast<std::size_t>(j)] * p.at(m + s * j);
            out.set(k, m, acc);
        }
    });
    return out;
}

ReconstructionResult roundtrip_check(const Field& u)
{
    AngularData ang = decompose(u);
    VanishingResult v = check_vanishing(ang);
    if (!v.is_zero)
        throw Error(ErrorKind::hypothesis_violation,
                    "angular Dirichlet sum is " + fmt17(v.residual) + ", not zero: field is not one-dimensional");
    Ratios rt = extract_ratios(u);
    const Window& w = u.win;
    ReconstructionResult res;
    res.c_plus = rt.c_plus;
    res.c_minus = rt.c_minus;
    res.ratio_constancy_error = rt.constancy_error;

    // profile range from column k1 = 0
    const long kneg = std::max(0L, -w.i1_min), kpos = std::max(0L, w.i1_max);
    long lo = w.i2_min - kneg, hi = w.i2_max + kpos;
    if (!u.closure) {
        lo = std::max(lo, w.s2_min());
        hi = std::min(hi, w.s2_max());
    }
    Profile1D p;
    p.h = w.h;
    p.m_min = lo;
    p.c_plus = rt.c_plus;
    p.c_minus = rt.c_minus;
    for (long m = lo; m <= hi; ++m) {
        double x;
        if (!u.get(0, m, x)) throw Error(ErrorKind::hypothesis_violation, "profile column k1 = 0 is not available");
        p.values.push_back(x);
    }
    Field out(w);
    double err = 0.0;
    long cmp = 0;
    bool flag = false;
    for (long k = w.i1_min; k <= w.i1_max; ++k) {
        const long n = k < 0 ? -k : k;
        const int s = k > 0 ? 1 : (k < 0 ? -1 : 0);
        const double c = k > 0 ? p.c_plus : (k < 0 ? p.c_minus : 1.0);
        if (n > 60) flag = true;
        const std::vector<double> wt = binomial_weights(n, c);
        for (long m = w.i2_min; m <= w.i2_max; ++m) {
            const long a = m + (s < 0 ? -n : 0), b = m + (s > 0 ? n : 0);
            if (a < p.m_min || b > p.m_max()) continue;
            double acc = 0.0;
            for (long j = 0; j <= n; ++j) acc += wt[static_cast<std::size_t>(j)] * p.at(m + s * j);
            out.set(k, m, acc);
            err = std::max(err, std::abs(acc - u.at(k, m)));
            ++cmp;
        }
    }
    res.reconstructed = out;
    res.max_abs_error = err;
    res.compared = cmp;
    res.precision_flag = flag;
    return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::invalid_argument, "need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ContinuumResult continuum_limit_error(const std::function<double(double)>& utilde, double c,
                                      const std::vector<double>& h_list)
{
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::invalid_argument, "c must lie in (0,1)");
    ContinuumResult r;
    for (double h : h_list) {
        if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "h must be positive");
        const double inv = 1.0 / h;
        const long n = std::lround(inv);
        if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-9 * inv)
            throw Error(ErrorKind::invalid_argument, "1/h must be a positive integer, got h = " + fmt17(h));
        const std::vector<double> wt = binomial_weights(n, c);
        double s = 0.0;
        for (long j = 0; j <= n; ++j) s += wt[static_cast<std::size_t>(j)] * utilde(static_cast<double>(j) / static_cast<double>(n));
        r.points.push_back({h, std::abs(s - utilde(c))});
    }
    r.strictly_decreasing = r.points.size() >= 2;
    for (std::size_t i = 1; i < r.points.size(); ++i)
        if (!(r.points[i].error < r.points[i - 1].error)) r.strictly_decreasing = false;
    std::vector<double> hs, es;
    bool positive = true;
    for (const auto& p : r.points) {
        hs.push_back(p.h);
        es.push_back(p.error);
        positive = positive && p.error > 0.0;
    }
    r.slope = (positive && hs.size() >= 2) ? loglog_slope(hs, es) : 0.0;
    return r;
}

void write_continuum_csv(std::ostream& os, const ContinuumResult& r)
{
    os << "h,error\n";
    for (const auto& p : r.points) os << fmt17(p.h) << ',' << fmt17(p.error) << '\n';
}

} // namespace fk
