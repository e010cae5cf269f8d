#pragma once

// Straight serial loops for the hot kernels. Slow on purpose: they are the
// yardstick the parallel versions are tested and benchmarked against.

#include "fk/angular.hpp"
#include "fk/diagnostics.hpp"
#include "fk/lattice.hpp"

#include <array>

namespace fk::ref {

Field lap(const Field& u);

AngularData decompose(const Field& u);

// Totals of angular_sums (no tails, no skipping diagnostics).
std::array<double, q_count> angular_totals(const Field& rho, const Field& theta, double theta_inf);

double kappa0(const Field& u, const SourceTerm& src, Sign variant);

} // namespace fk::ref
