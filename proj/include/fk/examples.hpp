#pragma once

#include "fk/diagnostics.hpp"
#include "fk/lattice.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fk {

enum class ExampleId { ex1, ex2_arctan, ex3_exp, ex4_semilinear, oned_factory };
const char* to_string(ExampleId id);

// Which computed quantity an analytic bound refers to.
enum class BoundTarget { kappa0_plus, kappa1_plus, kappa2_plus, kappa3_plus, kappa4_plus, kappa5_plus,
                         kappa6_plus, kappa7_plus, lhs_plus, Ch_plus };
const char* to_string(BoundTarget t);

struct AnalyticBound {
    std::string name;
    BoundTarget target;
    double value;
    enum Direction { upper, lower } direction;
};

struct HConstraint {
    double lo = 0.0, hi = 1.0; // lo is always exclusive
    bool hi_open = true;
    std::string text;
    bool admits(double h) const { return h > lo && (hi_open ? h < hi : h <= hi); }
};

struct ExampleSpec {
    ExampleId id = ExampleId::ex1;
    double h = 0.0;
    Closure u;
    SourceTerm src;
    double theta_inf_plus = 0.0, theta_inf_minus = 0.0;
    std::vector<AnalyticBound> bounds;
    HConstraint h_constraint;
    std::optional<double> kappa0_analytic;
    std::optional<double> kappa1_analytic;
    TailModels tails;
    std::string note;
};

ExampleSpec build_example1(double h);
ExampleSpec build_example2(double h);
ExampleSpec build_example3(double h);

struct SemilinearProfile {
    std::string name;
    std::function<double(double)> vtilde; // strictly increasing, vtilde'' = g(vtilde)
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
    double norm_v1 = 0.0; // ||vtilde'||
    double norm_v4 = 0.0; // ||vtilde''''||
    double norm_g1 = 0.0; // ||g'||
    double norm_g2 = 0.0; // ||g''||
};

// vtilde = 4 arctan(e^t), g = sin.
SemilinearProfile sine_gordon_profile();
// vtilde = t, g = 0 (reduces Example 4 to Example 1).
SemilinearProfile linear_profile();

ExampleSpec build_example4(double h, const SemilinearProfile& p);

// D2+ v_(0,0) = (vtilde(h) - vtilde(0)) / h.
double example4_d2v(double h, const SemilinearProfile& p);

struct OneDSolution {
    Closure u;
    SourceTerm src;
    double theta; // constant angle of both families
};

// u_i = phi(omega . i); f(t) = (1/h^2) sum_j [phi(s + h w_j) + phi(s - h w_j) - 2 phi(s)], s = phi^-1(t).
OneDSolution build_1d_solution(const std::function<double(double)>& phi, const std::function<double(double)>& phi_inv,
                               double omega1, double omega2, double h);

// Named profiles for the factory: "identity", "tanh" (tanh(t/sqrt 2)), "sine-gordon" (4 arctan e^t).
struct NamedPhi {
    std::function<double(double)> phi, inv;
};
NamedPhi named_phi(const std::string& name);

ExampleSpec build_oned_example(double h, const std::string& phi_name, double omega1, double omega2);

// Largest |lap(u) - f_table| over the stored sites of `w` for Example 1.
double example1_table_mismatch(double h, const Window& w);

// Sup of |fn| on [a, b]: grid scan then Brent refinement.
double sup_abs(const std::function<double(double)>& fn, double a, double b);

// S = sup_{t in [0,5]} t e^{-t^2+2t} (t^2+2).
double example3_S();

struct BoundCheck {
    AnalyticBound bound;
    double computed;
    bool ok;
};

std::vector<BoundCheck> check_bounds(const ExampleSpec& ex, const KappaReport& k, const TheoremReport& t);

} // namespace fk
