#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace deltaprime {

/// Polynomial piece of a profile: sum_j coeffs[j] * xi^j on [a, b].
/// Coefficients are in the global variable xi, constant term first.
struct Segment {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs;

  bool operator==(const Segment&) const = default;
};

struct Moments {
  double m0 = 0.0;  // integral of psi
  double m1 = 0.0;  // integral of xi * psi

  /// |m0| <= tol and |m1 + 1| <= tol.
  bool delta_prime_like(double tol = 1e-10) const;
};

/// Compactly supported real profile psi on [-1, 1]; zero outside its support.
///
/// Two representations are supported: contiguous polynomial segments, or
/// samples joined by linear interpolation. Instances are immutable and every
/// constructor validates its input, throwing InvalidInput on violation.
class PotentialProfile {
 public:
  enum class Kind { PiecewisePolynomial, Sampled };

  static PotentialProfile piecewise(std::vector<Segment> segments);
  static PotentialProfile sampled(std::vector<double> xi, std::vector<double> psi);

  Kind kind() const { return kind_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  double support_min() const;
  double support_max() const;

  /// Points where the profile (or one of its derivatives) may jump, including
  /// both ends of the support. Sorted ascending, no duplicates.
  std::vector<double> breakpoints() const;

  double operator()(double xi) const;

  /// Profile reflected about the origin, psi(-xi).
  PotentialProfile mirrored() const;

  /// True when every coefficient/value is exactly zero.
  bool identically_zero() const;

  bool operator==(const PotentialProfile&) const = default;

 private:
  PotentialProfile() = default;

  Kind kind_ = Kind::PiecewisePolynomial;
  std::vector<Segment> segments_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

double eval(const PotentialProfile& profile, double xi);

/// Exact integration: monomial antiderivatives per segment, or the exact
/// integral of the linear interpolant for sampled profiles.
Moments moments(const PotentialProfile& profile);

/// One of "seba-quadratic", "step", "zero".
PotentialProfile builtin(std::string_view name);
std::vector<std::string> builtin_names();

PotentialProfile parse_profile(std::string_view json_text);
PotentialProfile load_profile(const std::filesystem::path& path);

/// JSON in the same schema accepted by parse_profile; doubles are written in
/// shortest round-trip form, so parse_profile(to_json(p)) == p.
std::string profile_to_json(const PotentialProfile& profile);

}  // namespace deltaprime
