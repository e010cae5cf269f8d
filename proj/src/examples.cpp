#include "fk/examples.hpp"
#include "fk/angular.hpp"
#include "fk/calculus.hpp"
#include "fk/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fk {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kE2pi = std::exp(2.0 * kPi);

double p3(double h) { return h * h * h; }

void require_h(const HConstraint& c, double h)
{
    if (!c.admits(h)) throw Error(ErrorKind::invalid_argument, "h = " + fmt17(h) + " violates " + c.text);
}

AnalyticBound upper(const char* name, BoundTarget t, double v) { return {name, t, v, AnalyticBound::upper}; }
AnalyticBound lower(const char* name, BoundTarget t, double v) { return {name, t, v, AnalyticBound::lower}; }

TailModels compact_tails() { return TailModels::uniform({{Decay::compact, 0}, {Decay::compact, 0}}); }

// Example 1 bump: h^4 on the half row i2 = 0, i1 > 0.
double bump(long k1, long k2, double h) { return (k2 == 0 && k1 > 0) ? h * h * h * h : 0.0; }

// L of the bump, the four-valued table.
double bump_lap(long k1, long k2, double h)
{
    const double h2 = h * h;
    if (k1 == 0 && k2 == 0) return h2;
    if (k1 > 0 && (k2 == 1 || k2 == -1)) return h2;
    if (k1 == 1 && k2 == 0) return -3.0 * h2;
    if (k1 >= 2 && k2 == 0) return -2.0 * h2;
    return 0.0;
}

} // namespace

const char* to_string(ExampleId id)
{
    switch (id) {
    case ExampleId::ex1: return "ex1";
    case ExampleId::ex2_arctan: return "ex2-arctan";
    case ExampleId::ex3_exp: return "ex3-exp";
    case ExampleId::ex4_semilinear: return "ex4-semilinear";
    case ExampleId::oned_factory: return "oned-factory";
    }
    return "?";
}

const char* to_string(BoundTarget t)
{
    switch (t) {
    case BoundTarget::kappa0_plus: return "kappa0_plus";
    case BoundTarget::kappa1_plus: return "kappa1_plus";
    case BoundTarget::kappa2_plus: return "kappa2_plus";
    case BoundTarget::kappa3_plus: return "kappa3_plus";
    case BoundTarget::kappa4_plus: return "kappa4_plus";
    case BoundTarget::kappa5_plus: return "kappa5_plus";
    case BoundTarget::kappa6_plus: return "kappa6_plus";
    case BoundTarget::kappa7_plus: return "kappa7_plus";
    case BoundTarget::lhs_plus: return "lhs_plus";
    case BoundTarget::Ch_plus: return "Ch_plus";
    }
    return "?";
}

double sup_abs(const std::function<double(double)>& fn, double a, double b)
{
    const int n = 2000;
    double best = -1.0;
    int bi = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        const double v = std::abs(fn(t));
        if (v > best) {
            best = v;
            bi = i;
        }
    }
    const double lo = a + (b - a) * std::max(0, bi - 1) / n;
    const double hi = a + (b - a) * std::min(n, bi + 1) / n;
    auto neg = [&](double t) { return -std::abs(fn(t)); };
    auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 50);
    return std::max(best, -r.second);
}

double example3_S()
{
    static const double S = sup_abs([](double t) { return t * std::exp(-t * t + 2.0 * t) * (t * t + 2.0); }, 0.0, 5.0);
    return S;
}

ExampleSpec build_example1(double h)
{
    ExampleSpec ex;
    ex.id = ExampleId::ex1;
    ex.h_constraint = {0.0, 1.0, true, "0 < h < 1"};
    require_h(ex.h_constraint, h);
    ex.h = h;
    ex.u = [h](long k1, long k2) { return (k2 == 0 && k1 > 0) ? h * h * h * h : h * static_cast<double>(k2); };
    ex.src.f = [h](long k1, long k2, double) { return bump_lap(k1, k2, h); };
    ex.src.Lf_plus = [](long, long, double) { return 0.0; };
    ex.src.Lf_minus = ex.src.Lf_plus;
    ex.theta_inf_plus = ex.theta_inf_minus = kPi / 2;
    ex.kappa0_analytic = 5.0;
    ex.kappa1_analytic = 1.0 + p3(h);
    const double h3 = p3(h), h4 = h3 * h, h9 = h3 * h3 * h3;
    ex.bounds = {
        upper("kappa0_plus <= 5", BoundTarget::kappa0_plus, 5.0),
        upper("kappa2_plus <= 21 h^3", BoundTarget::kappa2_plus, 21.0 * h3),
        upper("kappa3_plus <= 8 h^9", BoundTarget::kappa3_plus, 8.0 * h9),
        upper("kappa4_plus <= 5 sqrt2 h^9", BoundTarget::kappa4_plus, 5.0 * kSqrt2 * h9),
        upper("kappa5_plus <= 5 sqrt2 h^3", BoundTarget::kappa5_plus, 5.0 * kSqrt2 * h3),
        upper("kappa6_plus <= 29 h^3", BoundTarget::kappa6_plus, 29.0 * h3),
        upper("kappa7_plus <= 7 h^9", BoundTarget::kappa7_plus, 7.0 * h9),
        lower("lhs_plus >= (16/pi^2) h^4", BoundTarget::lhs_plus, 16.0 / (kPi * kPi) * h4),
        upper("C h <= 4[57+10 sqrt2+2e^{2pi}(8+5 sqrt2)] h^4", BoundTarget::Ch_plus,
              4.0 * (57.0 + 10.0 * kSqrt2 + 2.0 * kE2pi * (8.0 + 5.0 * kSqrt2)) * h4),
    };
    ex.tails = compact_tails();
    return ex;
}

ExampleSpec build_example2(double h)
{
    ExampleSpec ex;
    ex.id = ExampleId::ex2_arctan;
    ex.h_constraint = {0.0, 1.0, false, "0 < h <= 1"};
    require_h(ex.h_constraint, h);
    ex.h = h;
    ex.u = [h](long k1, long k2) {
        const double x1 = h * static_cast<double>(k1), x2 = h * static_cast<double>(k2);
        return x2 + h / kPi * std::exp(-x2 * x2) * std::atan(x1);
    };
    ex.src.f = [h](long k1, long k2, double) {
        const double x1 = h * static_cast<double>(k1), x2 = h * static_cast<double>(k2);
        const double a = h * static_cast<double>(k1 + 1), b = h * static_cast<double>(k1 - 1);
        const double c = h * static_cast<double>(k2 + 1), d = h * static_cast<double>(k2 - 1);
        const double h2 = h * h;
        return h / kPi
             * (std::exp(-x2 * x2) * ((std::atan(a) + std::atan(b) - 2.0 * std::atan(x1)) / h2)
                + std::atan(x1) * ((std::exp(-c * c) + std::exp(-d * d) - 2.0 * std::exp(-x2 * x2)) / h2));
    };
    ex.src.Lf_plus = [](long, long, double) { return 0.0; };
    ex.src.Lf_minus = ex.src.Lf_plus;
    ex.theta_inf_plus = ex.theta_inf_minus = kPi / 2;
    ex.kappa0_analytic = 5.0 / kPi + 2.0;
    ex.kappa1_analytic = 1.5;
    const double c0 = 4.0 * std::pow(4.0 * kPi / (289.0 * (4.0 + 9.0 * kPi * kPi)), 2);
    ex.bounds = {
        upper("kappa0_plus <= 5/pi + 2", BoundTarget::kappa0_plus, 5.0 / kPi + 2.0),
        upper("kappa1_plus <= 3/2", BoundTarget::kappa1_plus, 1.5),
        lower("lhs_plus >= c0 h^2", BoundTarget::lhs_plus, c0 * h * h),
    };
    // along i1 the angle deviation decays like 1/(1+i1^2); along i2 like e^{-i2^2}
    TailModels t;
    const double pw[q_count] = {4, 4, 6, 6, 2, 4, 4};
    for (int q = 0; q < q_count; ++q) t.q[q] = {{Decay::power, pw[q]}, {Decay::gauss, 0.5}};
    ex.tails = t;
    return ex;
}

ExampleSpec build_example3(double h)
{
    ExampleSpec ex;
    ex.id = ExampleId::ex3_exp;
    ex.h_constraint = {0.0, 1.0, false, "0 < h <= 1"};
    require_h(ex.h_constraint, h);
    ex.h = h;
    ex.u = [h](long k1, long k2) {
        const double x1 = h * static_cast<double>(k1), x2 = h * static_cast<double>(k2);
        return x2 + h / 2.0 * std::exp(-(x1 * x1 + x2 * x2));
    };
    // L u_i = (e^{-|i|^2} / (2h)) sum_j (e^{-2h i_j - h^2} + e^{2h i_j - h^2} - 2)
    ex.src.f = [h](long k1, long k2, double) {
        const double x1 = h * static_cast<double>(k1), x2 = h * static_cast<double>(k2);
        const double h2 = h * h;
        double s = 0.0;
        for (double x : {x1, x2}) s += std::exp(-2.0 * h * x - h2) + std::exp(2.0 * h * x - h2) - 2.0;
        return std::exp(-(x1 * x1 + x2 * x2)) / (2.0 * h) * s;
    };
    ex.src.Lf_plus = [](long, long, double) { return 0.0; };
    ex.src.Lf_minus = ex.src.Lf_plus;
    ex.theta_inf_plus = ex.theta_inf_minus = kPi / 2;
    ex.kappa0_analytic = 64.0 * example3_S();
    ex.bounds = {upper("kappa0_plus <= 64 S", BoundTarget::kappa0_plus, 64.0 * example3_S())};
    ex.tails = TailModels::uniform({{Decay::gauss, 0.5}, {Decay::gauss, 0.5}});
    ex.note = "u(i1,i2) = u(-i1,i2)";
    return ex;
}

SemilinearProfile sine_gordon_profile()
{
    SemilinearProfile p;
    p.name = "sine-gordon";
    p.vtilde = [](double t) { return 4.0 * std::atan(std::exp(t)); };
    p.g = [](double r) { return std::sin(r); };
    p.g_prime = [](double r) { return std::cos(r); };
    p.norm_v1 = 2.0; // 2 sech t
    // vtilde'''' = 2 sech t tanh t (6 sech^2 t - 1)
    p.norm_v4 = sup_abs(
        [](double t) {
            const double s = 1.0 / std::cosh(t);
            return 2.0 * s * std::tanh(t) * (6.0 * s * s - 1.0);
        },
        0.0, 20.0);
    p.norm_g1 = 1.0;
    p.norm_g2 = 1.0;
    return p;
}

SemilinearProfile linear_profile()
{
    SemilinearProfile p;
    p.name = "linear";
    p.vtilde = [](double t) { return t; };
    p.g = [](double) { return 0.0; };
    p.g_prime = [](double) { return 0.0; };
    p.norm_v1 = 1.0;
    return p;
}

double example4_d2v(double h, const SemilinearProfile& p) { return (p.vtilde(h) - p.vtilde(0.0)) / h; }

ExampleSpec build_example4(double h, const SemilinearProfile& p)
{
    if (!p.vtilde || !p.g_prime) throw Error(ErrorKind::invalid_argument, "profile needs vtilde and g'");
    if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "h must be positive");
    ExampleSpec ex;
    ex.id = ExampleId::ex4_semilinear;
    const double D = example4_d2v(h, p);
    if (!(D > 0.0)) throw Error(ErrorKind::invalid_argument, "vtilde must be strictly increasing");
    const double thr = std::min(1.0, std::cbrt(D));
    ex.h_constraint = {0.0, thr, true, "0 < h < min{1, (D2+ v_(0,0))^(1/3)} = " + fmt17(thr)};
    require_h(ex.h_constraint, h);
    ex.h = h;
    auto v = p.vtilde;
    auto gp = p.g_prime;
    ex.u = [h, v](long k1, long k2) { return v(h * static_cast<double>(k2)) + bump(k1, k2, h); };
    ex.src.f = [h, v](long k1, long k2, double) {
        const double lv = (v(h * static_cast<double>(k2 + 1)) + v(h * static_cast<double>(k2 - 1))
                           - 2.0 * v(h * static_cast<double>(k2)))
                        / (h * h);
        return lv + bump_lap(k1, k2, h);
    };
    ex.src.Lf_plus = [h, v, gp](long, long k2, double) { return gp(v(h * static_cast<double>(k2))); };
    ex.src.Lf_minus = ex.src.Lf_plus;
    ex.theta_inf_plus = ex.theta_inf_minus = kPi / 2;
    const double S = p.norm_v1 + 1.0;
    const double k0 = (p.norm_v4 / 6.0 + p.norm_g2 * p.norm_v1 / 2.0) + (5.0 + p.norm_g1);
    ex.kappa0_analytic = k0;
    ex.kappa1_analytic = S;
    const double h3 = p3(h), h4 = h3 * h, h6 = h3 * h3, h9 = h6 * h3, D2 = D * D;
    const double c1 = 4.0 * ((36.0 * S * S + 16.0 * kE2pi * (1.0 + kSqrt2 * S)) / D2 + 2.0 * kSqrt2 * k0 + 24.0);
    ex.bounds = {
        upper("kappa0_plus <= {||v''''||/6 + ||g''|| ||v'||/2} + {5 + ||g'||}", BoundTarget::kappa0_plus, k0),
        upper("kappa1_plus <= S", BoundTarget::kappa1_plus, S),
        upper("kappa2_plus <= 12 (S/D)^2 h^3", BoundTarget::kappa2_plus, 12.0 * S * S / D2 * h3),
        upper("kappa3_plus <= 8/D^2 h^9", BoundTarget::kappa3_plus, 8.0 / D2 * h9),
        upper("kappa4_plus <= 8 sqrt2 S/D^2 h^6", BoundTarget::kappa4_plus, 8.0 * kSqrt2 * S / D2 * h6),
        upper("kappa5_plus <= kappa0 sqrt2 h^3", BoundTarget::kappa5_plus, k0 * kSqrt2 * h3),
        upper("kappa6_plus <= [8 S^2 h/D^2 + 24] h^3", BoundTarget::kappa6_plus, (8.0 * S * S * h / D2 + 24.0) * h3),
        upper("kappa7_plus <= 16 S^2/D^2 h^3", BoundTarget::kappa7_plus, 16.0 * S * S / D2 * h3),
        lower("lhs_plus >= (16/pi^2) h^4", BoundTarget::lhs_plus, 16.0 / (kPi * kPi) * h4),
        upper("C h <= c1 h^4", BoundTarget::Ch_plus, c1 * h4),
    };
    ex.tails = compact_tails();
    ex.note = "profile " + p.name + ", D2+ v_(0,0) = " + fmt17(D);
    return ex;
}

OneDSolution build_1d_solution(const std::function<double(double)>& phi, const std::function<double(double)>& phi_inv,
                               double w1, double w2, double h)
{
    if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "h must be positive");
    if (w1 == 0.0 && w2 == 0.0) throw Error(ErrorKind::invalid_argument, "omega must be nonzero");
    if (!phi || !phi_inv) throw Error(ErrorKind::invalid_argument, "phi and its inverse are required");
    // strict monotonicity on a probe grid
    int dir = 0;
    double prev = phi(-8.0);
    for (int i = 1; i <= 1600; ++i) {
        const double t = -8.0 + 0.01 * i;
        const double x = phi(t);
        const int d = x > prev ? 1 : (x < prev ? -1 : 0);
        if (d == 0 || (dir != 0 && d != dir)) throw Error(ErrorKind::invalid_argument, "phi is not strictly monotone");
        dir = d;
        prev = x;
    }
    OneDSolution s;
    // omega . i on indices first, then scaled: exact shifts for integer omega
    s.u = [phi, w1, w2, h](long k1, long k2) {
        return phi(h * (w1 * static_cast<double>(k1) + w2 * static_cast<double>(k2)));
    };
    auto F = [phi, phi_inv, w1, w2, h](double t) {
        const double x = phi_inv(t);
        double acc = 0.0;
        for (double wj : {w1, w2}) {
            if (wj == 0.0) continue;
            acc += phi(x + h * wj) + phi(x - h * wj) - 2.0 * phi(x);
        }
        return acc / (h * h);
    };
    s.src.f = [F](long, long, double r) { return F(r); };
    s.src.Lf_plus = [F](long, long, double r) {
        const double e = 1e-6 * std::max(1.0, std::abs(r));
        return (F(r + e) - F(r - e)) / (2.0 * e);
    };
    s.src.Lf_minus = s.src.Lf_plus;
    s.theta = dir > 0 ? principal_angle(w1, w2) : principal_angle(-w1, -w2);
    return s;
}

NamedPhi named_phi(const std::string& name)
{
    if (name == "identity") return {[](double t) { return t; }, [](double t) { return t; }};
    if (name == "tanh")
        return {[](double t) { return std::tanh(t / std::sqrt(2.0)); },
                [](double t) { return std::sqrt(2.0) * std::atanh(t); }};
    if (name == "sine-gordon")
        return {[](double t) { return 4.0 * std::atan(std::exp(t)); },
                [](double t) { return std::log(std::tan(t / 4.0)); }};
    throw Error(ErrorKind::invalid_argument, "unknown profile '" + name + "' (identity, tanh, sine-gordon)");
}

ExampleSpec build_oned_example(double h, const std::string& phi_name, double w1, double w2)
{
    NamedPhi np = named_phi(phi_name);
    OneDSolution s = build_1d_solution(np.phi, np.inv, w1, w2, h);
    ExampleSpec ex;
    ex.id = ExampleId::oned_factory;
    ex.h_constraint = {0.0, 1e300, false, "h > 0"};
    ex.h = h;
    ex.u = s.u;
    ex.src = s.src;
    ex.theta_inf_plus = ex.theta_inf_minus = s.theta;
    ex.tails = compact_tails();
    ex.note = "phi = " + phi_name + ", omega = (" + fmt17(w1) + "," + fmt17(w2) + ")";
    return ex;
}

double example1_table_mismatch(double h, const Window& w)
{
    ExampleSpec ex = build_example1(h);
    Field u = sample(ex.u, w);
    Field l = lap(u);
    double m = 0.0;
    for (std::size_t i = 0; i < l.v.size(); ++i) {
        if (!l.ok[i]) continue;
        const long k1 = w.s1_min() + static_cast<long>(i / static_cast<std::size_t>(w.ny()));
        const long k2 = w.s2_min() + static_cast<long>(i % static_cast<std::size_t>(w.ny()));
        m = std::max(m, std::abs(l.v[i] - bump_lap(k1, k2, h)));
    }
    return m;
}

std::vector<BoundCheck> check_bounds(const ExampleSpec& ex, const KappaReport& k, const TheoremReport& t)
{
    std::vector<BoundCheck> out;
    for (const AnalyticBound& b : ex.bounds) {
        double c = 0.0;
        switch (b.target) {
        case BoundTarget::kappa0_plus: c = k.plus.kappa[0]; break;
        case BoundTarget::kappa1_plus: c = k.plus.kappa[1]; break;
        case BoundTarget::kappa2_plus: c = k.plus.kappa[2]; break;
        case BoundTarget::kappa3_plus: c = k.plus.kappa[3]; break;
        case BoundTarget::kappa4_plus: c = k.plus.kappa[4]; break;
        case BoundTarget::kappa5_plus: c = k.plus.kappa[5]; break;
        case BoundTarget::kappa6_plus: c = k.plus.kappa[6]; break;
        case BoundTarget::kappa7_plus: c = k.plus.kappa[7]; break;
        case BoundTarget::lhs_plus: c = k.plus.lhs; break;
        case BoundTarget::Ch_plus: c = t.bound_Ch; break;
        }
        const bool ok = b.direction == AnalyticBound::upper ? c <= b.value : c >= b.value;
        out.push_back({b, c, ok});
    }
    return out;
}

} // namespace fk
