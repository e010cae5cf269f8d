#pragma once

#include "fk/calculus.hpp"
#include "fk/lattice.hpp"

#include <iosfwd>
#include <optional>

namespace fk {

// Polar form of U = D1 u + i D2 u for the forward (+) and backward (-)
// increments. theta lies in (-pi, pi]; sites with rho = 0 are invalid.
struct AngularData {
    Field rho_plus, theta_plus, rho_minus, theta_minus;
    double kappa1_plus = 0.0, kappa1_minus = 0.0;
    long zero_plus = 0, zero_minus = 0; // rho = 0 sites among stored ones

    const Field& rho(Sign s) const { return s == Sign::plus ? rho_plus : rho_minus; }
    const Field& theta(Sign s) const { return s == Sign::plus ? theta_plus : theta_minus; }
    double kappa1(Sign s) const { return s == Sign::plus ? kappa1_plus : kappa1_minus; }
    double h() const { return rho_plus.win.h; }
};

// atan2 mapped into (-pi, pi].
double principal_angle(double x, double y);

AngularData decompose(const Field& u);

struct AssumptionCheck {
    bool pass = true;
    long violations = 0;
    std::optional<SiteIndex> first;
};

struct AssumptionReport {
    AssumptionCheck grad_plus;  // sum_j |u_{i+he_j} - u_i|^2 > 0
    AssumptionCheck grad_minus; // sum_j |u_i - u_{i-he_j}|^2 > 0
    AssumptionCheck mono;       // u_{i+he_2} > u_i
};

// Checked over core sites.
AssumptionReport check_assumptions(const Field& u);

// k1,k2,rho_plus,theta_plus,rho_minus,theta_minus,valid over core sites.
void write_angular_csv(std::ostream& os, const AngularData& a);

} // namespace fk
