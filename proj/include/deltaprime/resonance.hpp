#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "deltaprime/potential.hpp"
#include "deltaprime/shooting.hpp"

namespace deltaprime {

/// A point of the resonant set: alpha with a Neumann eigenfunction on (-1, 1),
/// and the coupling value theta = w(1) / w(-1).
struct ResonantValue {
  double alpha = 0.0;
  double theta = 1.0;
  double residual = 0.0;             // |g(alpha)| at the refined root
  std::pair<double, double> bracket;  // scan bracket that isolated the root
  FundamentalData boundary;          // boundary data at the refined root
};

struct Resonant {
  double theta = 1.0;
  double alpha = 0.0;  // refined root that matched
};
struct NonResonant {};

/// Resonant(theta): the zero-range limit is S(theta). NonResonant: the
/// decoupled Dirichlet pair.
using Classification = std::variant<Resonant, NonResonant>;

inline bool is_resonant(const Classification& c) { return std::holds_alternative<Resonant>(c); }

struct ResonanceOptions {
  ShootOptions shoot;
  // Root refinement runs in extended precision; the Lagrange identity
  // theta v'(1) = 1 at |alpha| ~ 200 needs roots far below 1e-10.
  double xtol = 1e-24;
  int max_iter = 200;
};

struct ScanWarning {
  double alpha = 0.0;
  std::string message;
};

/// Resonant set within [alpha_min, alpha_max], ascending. alpha = 0 (always
/// resonant, theta = 1) is inserted analytically and the scan skips
/// |alpha| < scan_step / 2. Sign changes of g on the scan grid are refined by
/// Brent's method. Near-tangencies of g without a sign change are reported
/// through `warnings` rather than as roots.
std::vector<ResonantValue> find_resonances(const PotentialProfile& profile, double alpha_min,
                                           double alpha_max, double scan_step,
                                           const ResonanceOptions& opts = {},
                                           std::vector<ScanWarning>* warnings = nullptr);

/// theta = u(1; 0, alpha). Throws NotResonant unless
/// |u'(1; 0, alpha)| <= residual_tol * max(1, |u(1; 0, alpha)|).
double coupling(const PotentialProfile& profile, double alpha, double residual_tol = 1e-8,
                const ShootOptions& opts = {});

/// Resonant when a root of g lies within tol of alpha (the root is refined
/// again locally and its theta returned), NonResonant otherwise.
Classification classify(const PotentialProfile& profile, double alpha, double tol = 1e-8,
                        const ResonanceOptions& opts = {});

}  // namespace deltaprime
