#include "fk/diagnostics.hpp"
#include "fk/calculus.hpp"
#include "fk/error.hpp"
#include "fk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const double kE2pi = std::exp(2.0 * std::numbers::pi);

// Values along axis j around a site: theta at offsets -2..2, rho at -1..1.
struct AxisVals {
    double t[5];
    double r[3];
};

bool fetch(const Field& f, long a, long b, double& x)
{
    if (f.get(a, b, x)) return true;
    if (!f.win.stores(a, b) && !f.closure)
        throw Error(ErrorKind::stencil_out_of_range,
                    "angular stencil needs site (" + std::to_string(a) + "," + std::to_string(b)
                        + "); the halo must be at least 3");
    return false;
}

bool load_axis(const Field& rho, const Field& theta, long k1, long k2, int j, AxisVals& av)
{
    const int a = j == 1 ? 1 : 0, b = j == 2 ? 1 : 0;
    for (int d = -2; d <= 2; ++d)
        if (!fetch(theta, k1 + d * a, k2 + d * b, av.t[d + 2])) return false;
    for (int d = -1; d <= 1; ++d)
        if (!fetch(rho, k1 + d * a, k2 + d * b, av.r[d + 1])) return false;
    return true;
}

// Increments of one axis, all evaluated at the site.
struct AxisIncr {
    double Dp, Dm;       // D+theta, D-theta
    double Lshift;       // D+(D+theta)_{i-he_j} = D-(D-theta)_{i+he_j}
    double DDp, DDm;     // D+(D+theta)_i, D-(D-theta)_i
    double LL;           // L_j^2 theta
    double Drp, Drm;     // D+rho, D-rho
    double Dr2p, Dr2m;   // D+(rho^2), D-(rho^2)
};

AxisIncr increments(const AxisVals& v, double h)
{
    AxisIncr c;
    const double* t = v.t + 2;
    const double* r = v.r + 1;
    c.Dp = (t[1] - t[0]) / h;
    c.Dm = (t[0] - t[-1]) / h;
    c.Lshift = (c.Dp - c.Dm) / h;
    c.DDp = ((t[2] - t[1]) / h - c.Dp) / h;
    c.DDm = (c.Dm - (t[-1] - t[-2]) / h) / h;
    c.LL = (t[-2] - 4.0 * t[-1] + 6.0 * t[0] - 4.0 * t[1] + t[2]) / (h * h * h * h);
    c.Drp = (r[1] - r[0]) / h;
    c.Drm = (r[0] - r[-1]) / h;
    c.Dr2p = (r[1] * r[1] - r[0] * r[0]) / h;
    c.Dr2m = (r[0] * r[0] - r[-1] * r[-1]) / h;
    return c;
}

bool site_terms(const Field& rho, const Field& theta, double tinf, long k1, long k2, double out[q_count])
{
    const double h = rho.win.h;
    AxisVals av[2];
    if (!load_axis(rho, theta, k1, k2, 1, av[0]) || !load_axis(rho, theta, k1, k2, 2, av[1])) return false;
    for (int q = 0; q < q_count; ++q) out[q] = 0.0;
    const double r0 = av[0].r[1];
    const double r2 = r0 * r0;
    const double dev = std::abs(av[0].t[2] - tinf);
    for (int j = 0; j < 2; ++j) {
        const AxisIncr c = increments(av[j], h);
        const double ap = std::abs(c.Dp), am = std::abs(c.Dm);
        out[q_lhs] += r2 * (c.Dp * c.Dp + c.Dm * c.Dm);
        out[q_k2] += r2 * (ap * std::abs(c.Lshift) + am * std::abs(c.Lshift));
        out[q_k3] += r2 * (ap * ap * ap + am * am * am) * dev;
        out[q_k4] += r0 * (std::abs(c.Drp) * ap * ap + std::abs(c.Drm) * am * am) * dev;
        out[q_k6] += (std::abs(c.Dr2p) * std::abs(c.DDp) + std::abs(c.Dr2m) * std::abs(c.DDm)
                      + h * r2 * std::abs(c.LL))
                   * dev;
        out[q_k7] += (c.Drp * c.Drp * ap + c.Drm * c.Drm * am) * dev;
    }
    out[q_rho_dev] = r0 * dev;
    return true;
}

double axis_factor(const AxisDecay& d, long n, double h)
{
    switch (d.kind) {
    case Decay::domain:
    case Decay::compact: return 0.0;
    case Decay::power:
        if (n < 1 || !(d.rate > 1.0)) return kInf;
        return static_cast<double>(n) / (d.rate - 1.0);
    case Decay::gauss: {
        if (n < 1 || !(d.rate > 0.0)) return kInf;
        const double x = d.rate * h * h;
        return std::exp(-x * (2.0 * n + 1.0)) / (-std::expm1(-2.0 * x * n));
    }
    case Decay::unknown: return kInf;
    }
    return kInf;
}

double edge_contribution(const AxisDecay& d, long n, double h, double edge)
{
    if (d.kind == Decay::domain) return 0.0;
    if (d.kind == Decay::compact) return edge == 0.0 ? 0.0 : kInf;
    const double f = axis_factor(d, n, h);
    if (std::isinf(f)) return kInf;
    return f * edge;
}

} // namespace

double tail_estimate(const Window& w, const TailModel& m, double left, double right, double bottom, double top)
{
    const double h = w.h;
    const double cl = edge_contribution(m.ax1, -w.i1_min, h, left);
    const double cr = edge_contribution(m.ax1, w.i1_max, h, right);
    const double cb = edge_contribution(m.ax2, -w.i2_min, h, bottom);
    const double ct = edge_contribution(m.ax2, w.i2_max, h, top);
    double t = cl + cr;
    if (cb + ct != 0.0) {
        // rows beyond the top/bottom edges also extend past the side edges
        const double fl = axis_factor(m.ax1, -w.i1_min, h), fr = axis_factor(m.ax1, w.i1_max, h);
        t += (cb + ct) * (1.0 + fl + fr);
    }
    return t;
}

AngularSums angular_sums(const Field& rho, const Field& theta, double theta_inf, const TailModels& tails)
{
    const Window& w = rho.win;
    const long nrow = w.i1_max - w.i1_min + 1;
    struct RowAcc {
        std::array<double, q_count> tot{}, bottom{}, top{};
        long skipped = 0;
    };
    std::vector<RowAcc> rows(static_cast<std::size_t>(nrow));
    par::for_rows(nrow, [&](long r) {
        RowAcc& acc = rows[static_cast<std::size_t>(r)];
        const long k1 = w.i1_min + r;
        double t[q_count];
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            if (!site_terms(rho, theta, theta_inf, k1, k2, t)) {
                ++acc.skipped;
                continue;
            }
            for (int q = 0; q < q_count; ++q) {
                acc.tot[q] += t[q];
                if (k2 == w.i2_min) acc.bottom[q] += t[q];
                if (k2 == w.i2_max) acc.top[q] += t[q];
            }
        }
    });
    AngularSums s;
    std::array<double, q_count> bottom{}, top{};
    for (const RowAcc& acc : rows) {
        for (int q = 0; q < q_count; ++q) {
            s.total[q] += acc.tot[q];
            bottom[q] += acc.bottom[q];
            top[q] += acc.top[q];
        }
        s.skipped += acc.skipped;
    }
    for (int q = 0; q < q_count; ++q)
        s.tail[q] = tail_estimate(w, tails.q[q], rows.front().tot[q], rows.back().tot[q], bottom[q], top[q]);
    return s;
}

double kappa0(const Field& u, const SourceTerm& src, Sign variant)
{
    if (!src.f) throw Error(ErrorKind::invalid_argument, "source term has no f");
    const SiteValueRule& L = (variant == Sign::minus && src.Lf_minus) ? src.Lf_minus : src.Lf_plus;
    const Window& w = u.win;
    const double h2 = w.h * w.h;
    const long nrow = w.i1_max - w.i1_min + 1;
    return par::ordered_max(nrow, [&](long r) {
        const long k1 = w.i1_min + r;
        double m = 0.0;
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double ui = u.at(k1, k2);
            const double fi = src.f(k1, k2, ui);
            const double li = L ? L(k1, k2, ui) : 0.0;
            double s = 0.0;
            for (int j = 1; j <= 2; ++j) {
                const int a = j == 1 ? 1 : 0, b = j == 2 ? 1 : 0;
                if (variant == Sign::plus) {
                    const double un = u.at(k1 + a, k2 + b);
                    s += std::abs(src.f(k1 + a, k2 + b, un) - fi - li * (un - ui));
                } else {
                    const double un = u.at(k1 - a, k2 - b);
                    s += std::abs(fi - src.f(k1 - a, k2 - b, un) - li * (ui - un));
                }
            }
            s /= h2;
            if (!std::isfinite(s))
                throw Error(ErrorKind::evaluation_error,
                            "source term not finite near (" + std::to_string(k1) + "," + std::to_string(k2) + ")");
            m = std::max(m, s);
        }
        return m;
    });
}

double kappa0_autonomous_bound(double kappa1, double fhat_second_sup) { return kappa1 * kappa1 * fhat_second_sup; }

namespace {
const TailModels& no_tails()
{
    static const TailModels t = TailModels::uniform({{Decay::unknown, 0}, {Decay::unknown, 0}});
    return t;
}
} // namespace

double kappa2(const AngularData& ang, Sign variant)
{
    return angular_sums(ang.rho(variant), ang.theta(variant), 0.0, no_tails()).total[q_k2];
}

std::array<double, 5> kappa3_to_7(const AngularData& ang, double theta_inf, double k0, Sign variant)
{
    AngularSums s = angular_sums(ang.rho(variant), ang.theta(variant), theta_inf, no_tails());
    return {s.total[q_k3], s.total[q_k4], k0 * s.total[q_rho_dev], s.total[q_k6], s.total[q_k7]};
}

double lhs_form(const AngularData& ang, Sign variant)
{
    return angular_sums(ang.rho(variant), ang.theta(variant), 0.0, no_tails()).total[q_lhs];
}

double default_theta_inf(const AngularData& ang, Sign variant)
{
    const Field& t = ang.theta(variant);
    const Window& w = t.win;
    if (t.valid(w.i1_max, w.i2_max)) return t.v[w.index(w.i1_max, w.i2_max)];
    for (std::size_t i = 0; i < t.v.size(); ++i)
        if (t.ok[i]) return t.v[i];
    return 0.0;
}

namespace {
KappaFamily family(const Field& u, const AngularData& ang, const SourceTerm& src, Sign s, double tinf,
                   const TailModels& tails)
{
    KappaFamily fam;
    fam.theta_inf = tinf;
    AngularSums sums = angular_sums(ang.rho(s), ang.theta(s), tinf, tails);
    const double k0 = kappa0(u, src, s);
    fam.kappa = {k0, ang.kappa1(s), sums.total[q_k2], sums.total[q_k3], sums.total[q_k4],
                 k0 * sums.total[q_rho_dev], sums.total[q_k6], sums.total[q_k7]};
    const double t5 = k0 == 0.0 ? 0.0 : k0 * sums.tail[q_rho_dev];
    fam.tail = {0.0, 0.0, sums.tail[q_k2], sums.tail[q_k3], sums.tail[q_k4], t5, sums.tail[q_k6], sums.tail[q_k7]};
    fam.lhs = sums.total[q_lhs];
    fam.lhs_tail = sums.tail[q_lhs];
    fam.skipped = sums.skipped;
    return fam;
}
} // namespace

KappaReport compute_kappas(const Field& u, const AngularData& ang, const SourceTerm& src, const KappaOptions& opt)
{
    KappaReport rep;
    rep.h = u.win.h;
    rep.plus = family(u, ang, src, Sign::plus, opt.theta_inf_plus, opt.tails);
    if (opt.with_minus) rep.minus = family(u, ang, src, Sign::minus, opt.theta_inf_minus, opt.tails);
    const Window& w = u.win;
    long bad = 0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2)
            if (!ang.rho_plus.valid(k1, k2) || (opt.with_minus && !ang.rho_minus.valid(k1, k2))) ++bad;
    rep.invalid_site_count = bad;
    return rep;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive_truncation: return "inconclusive-truncation";
    }
    return "?";
}

double theorem_constant(const std::array<double, 8>& k)
{
    return 4.0 * (k[2] + 2.0 * kE2pi * k[3] + 2.0 * kE2pi * k[4] + 2.0 * k[5] + k[6] + k[7]);
}

TheoremReport verify_theorem(const KappaReport& report, const AngularData& ang, double h, TheoremMode mode)
{
    TheoremReport tr;
    tr.lhs_form_plus = report.plus.lhs;
    std::array<double, 8> k = report.plus.kappa;
    tr.lhs = report.plus.lhs;
    tr.lhs_tail = report.plus.lhs_tail;
    if (report.minus) tr.lhs_form_minus = report.minus->lhs;
    if (mode == TheoremMode::tutta) {
        if (!report.minus) throw Error(ErrorKind::invalid_argument, "tutta mode needs the minus family");
        for (int m = 0; m < 8; ++m) k[m] += report.minus->kappa[m];
        tr.lhs_tutta = report.plus.lhs + report.minus->lhs;
        tr.lhs = *tr.lhs_tutta;
        tr.lhs_tail += report.minus->lhs_tail;
    }
    tr.constant_C = theorem_constant(k);
    tr.bound_Ch = tr.constant_C * h;
    if (tr.lhs + tr.lhs_tail <= tr.bound_Ch)
        tr.verdict = Verdict::holds;
    else if (tr.lhs <= tr.bound_Ch)
        tr.verdict = Verdict::inconclusive_truncation;
    else
        tr.verdict = Verdict::violated;

    const Window& w = ang.rho_plus.win;
    std::vector<SiteContribution> all;
    double t[q_count], t2[q_count];
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            double c = 0.0;
            if (site_terms(ang.rho_plus, ang.theta_plus, 0.0, k1, k2, t)) c += t[q_lhs];
            if (mode == TheoremMode::tutta && site_terms(ang.rho_minus, ang.theta_minus, 0.0, k1, k2, t2))
                c += t2[q_lhs];
            if (c > 0.0) all.push_back({{k1, k2}, c});
        }
    std::stable_sort(all.begin(), all.end(),
                     [](const SiteContribution& a, const SiteContribution& b) { return a.value > b.value; });
    if (all.size() > 5) all.resize(5);
    tr.worst_sites = all;
    return tr;
}

double equation_residual(const Field& u, const SourceTerm& src)
{
    Field l = lap(u);
    const Window& w = u.win;
    double m = 0.0;
    for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
        for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) {
            const double ui = u.at(k1, k2);
            m = std::max(m, std::abs(l.at(k1, k2) - src.f(k1, k2, ui)));
        }
    return m;
}

RemainderReport linearized_residual(const Field& u, const SourceTerm& src, const AngularData& ang)
{
    RemainderReport rep;
    const Window& w = u.win;
    rep.equation_residual = equation_residual(u, src);
    const double scale = std::max(1.0, max_abs_core(lap(u)));
    if (rep.equation_residual > 1e-10 * scale)
        throw Error(ErrorKind::equation_residual_too_large,
                    "max |Lu - f| = " + fmt17(rep.equation_residual) + " exceeds 1e-10 * " + fmt17(scale));
    rep.kappa0 = kappa0(u, src, Sign::plus);
    const double k0 = rep.kappa0;
    const Field& rho = ang.rho_plus;
    const Field& th = ang.theta_plus;
    const double h = w.h;
    const long nrow = w.i1_max - w.i1_min + 1, ncol = w.i2_max - w.i2_min + 1;
    std::vector<SiteRemainder> slots(static_cast<std::size_t>(nrow * ncol));
    std::vector<unsigned char> have(slots.size(), 0);
    par::for_rows(nrow, [&](long r) {
        const long k1 = w.i1_min + r;
        for (long c = 0; c < ncol; ++c) {
            const long k2 = w.i2_min + c;
            AxisVals av[2];
            if (!load_axis(rho, th, k1, k2, 1, av[0]) || !load_axis(rho, th, k1, k2, 2, av[1])) continue;
            // identity side: sum_j D+(rho^2 D+theta)_i + D-(rho^2 D-theta)_i
            double eps = 0.0, sc = 0.0;
            for (int j = 0; j < 2; ++j) {
                const double* t = av[j].t + 2;
                const double* q = av[j].r + 1;
                const double gp1 = q[1] * q[1] * ((t[2] - t[1]) / h);
                const double gp0 = q[0] * q[0] * ((t[1] - t[0]) / h);
                const double gm0 = q[0] * q[0] * ((t[0] - t[-1]) / h);
                const double gm1 = q[-1] * q[-1] * ((t[-1] - t[-2]) / h);
                eps += (gp1 - gp0) / h + (gm0 - gm1) / h;
                sc += (std::abs(gp1) + std::abs(gp0) + std::abs(gm0) + std::abs(gm1)) / h;
            }
            // bound side
            const double r0 = av[0].r[1];
            const double r2 = r0 * r0;
            double b1 = 0.0, b2 = 0.0, b4 = 0.0, b5 = 0.0;
            for (int j = 0; j < 2; ++j) {
                const AxisIncr ci = increments(av[j], h);
                const double ap = std::abs(ci.Dp), am = std::abs(ci.Dm);
                b1 += r2 * (ap * ap * ap + am * am * am);
                b2 += r0 * (std::abs(ci.Drp) * ap * ap + std::abs(ci.Drm) * am * am);
                b4 += std::abs(ci.Dr2p) * std::abs(ci.DDp) + std::abs(ci.Dr2m) * std::abs(ci.DDm)
                    + h * r2 * std::abs(ci.LL);
                b5 += ci.Drp * ci.Drp * ap + ci.Drm * ci.Drm * am;
            }
            const double bound = 2.0 * kE2pi * h * b1 + 2.0 * kE2pi * h * b2 + 2.0 * k0 * h * r0 + h * b4 + h * b5;
            const std::size_t idx = static_cast<std::size_t>(r * ncol + c);
            slots[idx] = {{k1, k2}, eps, bound, sc};
            have[idx] = 1;
        }
    });
    rep.max_excess = -kInf;
    long sharp = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!have[i]) {
            ++rep.skipped;
            continue;
        }
        const SiteRemainder& s = slots[i];
        rep.sites.push_back(s);
        ++rep.evaluated;
        const double a = std::abs(s.eps);
        rep.max_excess = std::max(rep.max_excess, a - s.bound);
        if (a > s.bound + 1e-12 * s.scale) ++rep.violations;
        if (s.bound > 0.0 && a >= 0.9 * s.bound) ++sharp;
    }
    if (rep.evaluated == 0) rep.max_excess = 0.0;
    rep.sharp_fraction = rep.evaluated ? static_cast<double>(sharp) / static_cast<double>(rep.evaluated) : 0.0;
    return rep;
}

} // namespace fk
