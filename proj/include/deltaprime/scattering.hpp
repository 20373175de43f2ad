#pragma once

#include <complex>
#include <string_view>

#include "deltaprime/potential.hpp"
#include "deltaprime/resonance.hpp"
#include "deltaprime/shooting.hpp"

namespace deltaprime {

enum class Regime { Limit, FiniteEpsilon, Asymptotic };

std::string_view to_string(Regime r);

/// Reflection and transmission amplitudes for a wave e^{ikx} incident from
/// the left.
struct ScatteringCoefficients {
  std::complex<double> R;
  std::complex<double> T;
  Regime regime = Regime::Limit;
};

/// Zero-range limit. Resonant(theta): R = (1 - theta^2) / (1 + theta^2),
/// T = 2 theta / (1 + theta^2); NonResonant: R = -1, T = 0. No k dependence.
ScatteringCoefficients limit_coeffs(const Classification& c);

/// Exact coefficients for the potential alpha eps^-2 psi(x / eps) at
/// wavenumber k, from the 4x4 matching system at x = -eps and x = +eps in the
/// unknowns (R, A, B, T), solved by pivoted elimination.
/// Throws InvalidInput unless k > 0 and eps > 0, and NumericalFailure when a
/// pivot falls below 1e-13 times its row scale.
ScatteringCoefficients finite_coeffs(const PotentialProfile& profile, double alpha, double k,
                                     double eps, const ShootOptions& opts = {});

/// q(alpha) = 2 u'(1; 0, alpha) - u(1; 0, alpha) - v'(1; 0, alpha).
double q_factor(const PotentialProfile& profile, double alpha, const ShootOptions& opts = {});

/// Leading-order small-kappa expansion (kappa = eps k):
///   R = (-u' + i kappa (u - v')) / (u' + i kappa q),  T = -2 i kappa / (u' + i kappa q)
/// with boundary data at kappa = 0. Intended for |kappa| <~ 0.1 (not enforced).
/// When |u'(1; 0, alpha)| <= resonance_residual_tol * max(1, |u(1; 0, alpha)|)
/// alpha is taken as resonant and u' is set to zero.
ScatteringCoefficients asymptotic_coeffs(const PotentialProfile& profile, double alpha,
                                         double kappa, const ShootOptions& opts = {},
                                         double resonance_residual_tol = 1e-8);

}  // namespace deltaprime
