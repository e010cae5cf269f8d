#pragma once

#include "fk/angular.hpp"
#include "fk/lattice.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace fk {

struct VanishingResult {
    bool is_zero = false;
    double residual = 0.0;
    double scale = 0.0;
};

// Sum over the core of rho+^2(|D+theta+|^2 + |D-theta+|^2) + the same for
// the minus family. Requires every core site valid in both families.
VanishingResult check_vanishing(const AngularData& ang);

struct Ratios {
    double c_plus = 0.0, c_minus = 0.0;
    double constancy_error = 0.0;
    SiteIndex reference;
};

// c+- = (u_{i+-he1} - u_i) / (u_{i+-he2} - u_i), read at the core site
// nearest the window center; constancy_error is the max deviation over the core.
Ratios extract_ratios(const Field& u);

struct Profile1D {
    double h = 1.0;
    long m_min = 0;
    std::vector<double> values; // utilde_{h m} for m = m_min, m_min+1, ...
    double c_plus = 0.0, c_minus = 0.0;

    long m_max() const { return m_min + static_cast<long>(values.size()) - 1; }
    double at(long m) const;
};

// Binomial weights C(n,j) c^j (1-c)^(n-j), j = 0..n. Pascal recurrence for the
// coefficients up to n = 40, log-space beyond (for c in (0,1)).
std::vector<double> binomial_weights(long n, double c);
// Pascal-recurrence binomial coefficient row n (as doubles).
std::vector<double> pascal_row(long n);

struct ReconstructOptions {
    long k_min = 0, k_max = 0, m_min = 0, m_max = 0;
};

// u_(hk,hm) = sum_j C(|k|,j) (c^{s})^j (1-c^{s})^{|k|-j} utilde_{h(m + s j)},
// s = sign(k), with c^{s} = c+ or c-. Sets `flag` when |k| > 60.
Field reconstruct_1d(const Profile1D& p, const ReconstructOptions& o, bool* flag = nullptr);

struct ReconstructionResult {
    Field reconstructed;
    double max_abs_error = 0.0;
    double ratio_constancy_error = 0.0;
    double c_plus = 0.0, c_minus = 0.0;
    long compared = 0;
    bool precision_flag = false;
};

// Extracts c+-, takes utilde_{hm} := u_(0,hm), reconstructs the core window
// and compares. Uses the closure of u to extend the profile when present.
ReconstructionResult roundtrip_check(const Field& u);

struct ContinuumPoint {
    double h;
    double error;
};

struct ContinuumResult {
    std::vector<ContinuumPoint> points;
    bool strictly_decreasing = false;
    double slope = 0.0;
};

// error_h = |sum_j C(1/h,j) c^j (1-c)^{1/h-j} utilde(hj) - utilde(c)|.
ContinuumResult continuum_limit_error(const std::function<double(double)>& utilde, double c,
                                      const std::vector<double>& h_list);

void write_continuum_csv(std::ostream& os, const ContinuumResult& r);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace fk
