#pragma once

#include "fk/lattice.hpp"

namespace fk {

enum class Sign { plus, minus };

struct Direction {
    int axis = 1; // 1 or 2
    Sign sign = Sign::plus;
};

struct Tap {
    int d1, d2;
    double w;
};

// out_i = (sum_k w_k u_{i+d_k}) / divisor at each stored site whose taps are
// available. Sites with an unavailable tap are invalid; a core site whose tap
// falls outside storage (and no closure) raises stencil-out-of-range.
Field apply_stencil(const Field& u, const Tap* taps, int ntaps, double divisor);

Field dplus(const Field& u, int j);
Field dminus(const Field& u, int j);
Field dsigned(const Field& u, int j, Sign s);
Field lap_j(const Field& u, int j);
Field lap(const Field& u);
Field lap_j_squared(const Field& u, int j);

// Pointwise combinations over a common window; invalid where any input is.
Field pointwise_product(const Field& a, const Field& b);
Field pointwise_sum(const Field& a, const Field& b);
Field pointwise_diff(const Field& a, const Field& b);

double max_abs(const Field& f);
double max_abs_core(const Field& f);

struct IdentityCheck {
    double residual = 0.0; // max (or total) absolute defect
    double scale = 0.0;    // rounding scale the residual is compared against
    bool within(double rel) const { return residual <= rel * scale; }
};

// D(fg) - [avg(f) Dg + avg(g) Df], averages taken toward the increment direction.
IdentityCheck check_product_rule(const Field& f, const Field& g, Direction dir);
// L(fg) - [Lf g + Lg f + sum_j (D+f D+g + D-f D-g)].
IdentityCheck check_product_laplacian(const Field& f, const Field& g);
// D+(D+f)_i vs L_j f_{i+he_j}, D-(D-f)_i vs L_j f_{i-he_j},
// L_j vs D+D- and D-D+, and L vs L_1 + L_2. Worst over all of them.
IdentityCheck check_iterated_increments(const Field& f);
// sum D^s f g + sum f D^{-s} g for g supported strictly inside the core.
IdentityCheck sum_by_parts_residual(const Field& f, const Field& g, int j, Sign variant);

} // namespace fk
