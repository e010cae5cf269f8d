#pragma once

#include "fk/angular.hpp"
#include "fk/lattice.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fk {

using SiteValueRule = std::function<double(long k1, long k2, double r)>;

struct SourceTerm {
    SiteValueRule f;
    SiteValueRule Lf_plus;
    SiteValueRule Lf_minus; // falls back to Lf_plus when empty
};

// Decay of per-site contributions beyond the window edge along one axis.
//   domain:  the window is the whole domain, nothing lies outside
//   compact: contributions vanish outside a bounded set; tail is 0 when the
//            edge strip is exactly zero, otherwise unknown (infinite)
//   power:   ~ |k|^-rate in lattice steps
//   gauss:   ~ exp(-rate * x^2) in position units
//   unknown: no model, tail reported as infinite
enum class Decay { domain, compact, power, gauss, unknown };

struct AxisDecay {
    Decay kind = Decay::unknown;
    double rate = 0.0;
};

struct TailModel {
    AxisDecay ax1, ax2;
};

// Quantities summed over the lattice.
enum Q { q_lhs = 0, q_k2, q_k3, q_k4, q_rho_dev, q_k6, q_k7, q_count };

struct TailModels {
    std::array<TailModel, q_count> q{};
    static TailModels uniform(TailModel m)
    {
        TailModels t;
        t.q.fill(m);
        return t;
    }
};

struct AngularSums {
    std::array<double, q_count> total{};
    std::array<double, q_count> tail{};
    long skipped = 0; // core sites left out because a stencil value is invalid
};

// One pass over the core window computing the FORM left side and the sums
// behind kappa2..kappa7 (kappa5 without its kappa0 factor).
AngularSums angular_sums(const Field& rho, const Field& theta, double theta_inf, const TailModels& tails);

// Sums the edge strips of a per-site quantity and extrapolates by `model`.
double tail_estimate(const Window& w, const TailModel& model, double left, double right, double bottom, double top);

struct KappaFamily {
    std::array<double, 8> kappa{}; // kappa0..kappa7
    std::array<double, 8> tail{};
    double lhs = 0.0;
    double lhs_tail = 0.0;
    double theta_inf = 0.0;
    long skipped = 0;
};

struct KappaReport {
    double h = 0.0;
    KappaFamily plus;
    std::optional<KappaFamily> minus;
    long invalid_site_count = 0;
    std::optional<double> kappa0_analytic;
    std::optional<double> kappa1_analytic;
};

double kappa0(const Field& u, const SourceTerm& src, Sign variant);
double kappa0_autonomous_bound(double kappa1, double fhat_second_sup);
double kappa2(const AngularData& ang, Sign variant);
// kappa3..kappa7 in that order.
std::array<double, 5> kappa3_to_7(const AngularData& ang, double theta_inf, double kappa0, Sign variant);
double lhs_form(const AngularData& ang, Sign variant);

struct KappaOptions {
    double theta_inf_plus = 0.0;
    double theta_inf_minus = 0.0;
    bool with_minus = true;
    TailModels tails = TailModels::uniform({{Decay::unknown, 0}, {Decay::unknown, 0}});
};

KappaReport compute_kappas(const Field& u, const AngularData& ang, const SourceTerm& src, const KappaOptions& opt);

// theta at the far corner (i1_max, i2_max), else the first valid site.
double default_theta_inf(const AngularData& ang, Sign variant);

enum class TheoremMode { form_plus, tutta };
enum class Verdict { holds, violated, inconclusive_truncation };
const char* to_string(Verdict v);

struct SiteContribution {
    SiteIndex site;
    double value;
};

struct TheoremReport {
    double lhs_form_plus = 0.0;
    std::optional<double> lhs_form_minus;
    std::optional<double> lhs_tutta;
    double lhs = 0.0;      // the side compared against C h
    double lhs_tail = 0.0;
    double constant_C = 0.0;
    double bound_Ch = 0.0;
    Verdict verdict = Verdict::holds;
    std::vector<SiteContribution> worst_sites;
};

double theorem_constant(const std::array<double, 8>& kappa);

TheoremReport verify_theorem(const KappaReport& report, const AngularData& ang, double h, TheoremMode mode);

struct SiteRemainder {
    SiteIndex site;
    double eps;
    double bound;
    double scale; // rounding scale of eps
};

struct RemainderReport {
    std::vector<SiteRemainder> sites;
    double kappa0 = 0.0;
    double equation_residual = 0.0;
    double max_excess = 0.0; // max over sites of |eps| - bound
    long violations = 0;     // |eps| > bound + 1e-12 * scale
    double sharp_fraction = 0.0;
    long evaluated = 0;
    long skipped = 0;
};

// |lap(u) - f(i,u_i)| over core sites.
double equation_residual(const Field& u, const SourceTerm& src);

RemainderReport linearized_residual(const Field& u, const SourceTerm& src, const AngularData& ang);

} // namespace fk
