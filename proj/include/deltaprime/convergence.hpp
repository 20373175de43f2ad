#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "deltaprime/potential.hpp"
#include "deltaprime/resonance.hpp"

namespace deltaprime {

/// Uniform staggered mesh on (-L, L): nodes x_i = -L + (i + 1) h, h = 2L / (N + 1),
/// homogeneous Dirichlet at +-L. N is even, so x = 0 falls midway between
/// nodes N/2 - 1 and N/2.
struct Grid {
  double L = 20.0;
  std::size_t N = 0;

  double h() const { return 2.0 * L / static_cast<double>(N + 1); }
  double node(std::size_t i) const { return -L + static_cast<double>(i + 1) * h(); }
  std::size_t left_of_origin() const { return N / 2 - 1; }

  /// Throws InvalidInput unless L > 1, N >= 64 and N even.
  void validate() const;
};

/// Smallest even N on (-L, L) with eps_min / h >= per_eps nodes.
Grid grid_for(double L, double eps_min, double per_eps);

/// Nodes per eps used when no N is given. eps / h >= 16 is enough for the
/// non-resonant case, but near a resonance the discrete problem shifts the
/// resonant alpha by O((h / eps)^2), which swamps the eps-effect at the
/// smallest eps unless the inner region is resolved much more finely.
inline constexpr double kDefaultNodesPerEps = 128.0;

enum class OperatorKind { Seps, Coupled, DirichletPair };

/// Real banded N x N matrix with two sub- and two super-diagonals; only the
/// two rows next to the origin use the outer diagonals.
struct DiscreteOperator {
  static constexpr int kBand = 2;

  OperatorKind kind = OperatorKind::Seps;
  Grid grid;
  double alpha = 0.0;
  double eps = 0.0;
  double theta = 0.0;
  std::vector<std::array<double, 2 * kBand + 1>> rows;  // rows[i][kBand + j - i] = A(i, j)

  std::size_t size() const { return rows.size(); }
  double at(std::size_t i, std::size_t j) const;
  std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& x) const;
};

/// -d^2/dx^2 + alpha eps^-2 psi(x / eps), second-order differences.
/// Throws InvalidInput when eps / h < 16.
DiscreteOperator discretize_seps(const PotentialProfile& profile, double alpha, double eps,
                                 const Grid& grid);

/// Resonant(theta): free operator with y(0+) = theta y(0-), theta y'(0+) = y'(0-)
/// imposed through ghost values from quadratic one-sided extrapolation.
/// NonResonant: independent Dirichlet problems on (-L, 0) and (0, L).
DiscreteOperator discretize_limit(const Classification& c, const Grid& grid);

/// Solves (op - k2) x = f. Throws InvalidInput when Im k2 == 0 or sizes
/// mismatch, NumericalFailure on a zero pivot or when the relative backward
/// error exceeds 1e-12.
std::vector<std::complex<double>> resolvent_apply(const DiscreteOperator& op,
                                                  std::complex<double> k2,
                                                  const std::vector<std::complex<double>>& f);

/// Mesh-weighted L2 norm sqrt(h sum |x_i|^2).
double mesh_norm(const std::vector<std::complex<double>>& x, double h);

/// Two Gaussians (sigma 0.5) centred at -1 and +1 and a smooth bump supported
/// in [0.5, 1.5], each of unit mesh norm.
std::vector<std::vector<std::complex<double>>> default_test_functions(const Grid& grid);

struct ConvergenceEntry {
  double eps = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> entries;  // decreasing eps
  double fitted_rate = 0.0;               // least-squares slope of log error vs log eps
  Classification limit_kind;
  Grid grid;
};

struct StudyOptions {
  double classify_tol = 1e-8;
  std::optional<Classification> force_limit;  // bypass classify()
  ResonanceOptions resonance;
};

/// error(eps) = max_f ||(S_eps - k2)^-1 f - (S_0 - k2)^-1 f|| / ||f|| over the
/// test functions, with S_0 the limit operator selected by classify().
/// Rejects the identically-zero profile.
ConvergenceReport study(const PotentialProfile& profile, double alpha,
                        const std::vector<double>& eps_list, const Grid& grid,
                        std::complex<double> k2,
                        const std::vector<std::vector<std::complex<double>>>& test_functions,
                        const StudyOptions& opts = {});

/// Slope of the least-squares line through (log eps, log error).
double fit_rate(const std::vector<ConvergenceEntry>& entries);

}  // namespace deltaprime
