#pragma once

#include "deltaprime/potential.hpp"

namespace deltaprime {

/// Boundary data at xi = 1 of the fundamental solutions of
///   -w'' + alpha * psi(xi) * w = kappa^2 * w   on (-1, 1)
/// with (u, u')(-1) = (1, 0) and (v, v')(-1) = (0, 1).
struct FundamentalData {
  double u1 = 0.0;
  double du1 = 0.0;
  double v1 = 0.0;
  double dv1 = 0.0;
  double wronskian_defect = 0.0;  // |u1 dv1 - du1 v1 - 1|, before rounding to double
};

enum class Integrator {
  // Power series per step, 113-bit arithmetic. Exact recurrence for the
  // polynomial pieces of psi; default.
  Taylor,
  // Embedded Dormand-Prince 5(4) in double precision, controlled by rtol/atol.
  DormandPrince45,
};

struct ShootOptions {
  Integrator integrator = Integrator::Taylor;
  double rtol = 1e-12;  // DormandPrince45 only
  double atol = 1e-14;  // DormandPrince45 only
  long max_steps = 2'000'000;
};

/// Integrates both fundamental solutions as one 4-component state from -1
/// to 1, restarting at every profile breakpoint so that no step straddles a
/// discontinuity of psi or of its derivatives.
/// Throws NumericalFailure on step-size underflow, exhausted step budget or
/// non-finite state.
FundamentalData shoot(const PotentialProfile& profile, double alpha, double kappa2,
                      const ShootOptions& opts = {});

/// g(alpha) = u'(1; 0, alpha). Its zeros are the resonant coupling constants.
double neumann_mismatch(const PotentialProfile& profile, double alpha,
                        const ShootOptions& opts = {});

}  // namespace deltaprime
