#include "deltaprime/scattering.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "deltaprime/error.hpp"

namespace deltaprime {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

// Solves a x = rhs by Gaussian elimination with partial pivoting. A pivot
// smaller than 1e-13 times the largest entry of its original row is treated
// as singular.
std::array<cplx, 4> solve4(std::array<std::array<cplx, 4>, 4> a, std::array<cplx, 4> rhs) {
  std::array<double, 4> scale{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) scale[i] = std::max(scale[i], std::abs(a[i][j]));

  cplx det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(rhs[piv], rhs[col]);
      std::swap(scale[piv], scale[col]);
      det = -det;
    }
    det *= a[col][col];
    if (!(std::abs(a[col][col]) >= 1e-13 * scale[col])) {
      std::ostringstream msg;
      msg << "matching system is singular or ill-conditioned (pivot " << std::abs(a[col][col])
          << " in column " << col << ", determinant estimate " << det << ")";
      throw NumericalFailure(msg.str());
    }
    for (int r = col + 1; r < 4; ++r) {
      cplx f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<cplx, 4> x{};
  for (int i = 3; i >= 0; --i) {
    cplx acc = rhs[i];
    for (int j = i + 1; j < 4; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Limit:
      return "limit";
    case Regime::FiniteEpsilon:
      return "finite-eps";
    case Regime::Asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

ScatteringCoefficients limit_coeffs(const Classification& c) {
  if (const auto* res = std::get_if<Resonant>(&c)) {
    const double t = res->theta;
    const double t2 = t * t;
    return {cplx((1.0 - t2) / (1.0 + t2)), cplx(2.0 * t / (1.0 + t2)), Regime::Limit};
  }
  return {cplx(-1.0), cplx(0.0), Regime::Limit};
}

ScatteringCoefficients finite_coeffs(const PotentialProfile& profile, double alpha, double k,
                                     double eps, const ShootOptions& opts) {
  if (!std::isfinite(k) || !(k > 0.0)) throw InvalidInput("finite_coeffs: k must be positive");
  if (!std::isfinite(eps) || !(eps > 0.0))
    throw InvalidInput("finite_coeffs: eps must be positive");

  const double kappa = eps * k;
  const FundamentalData d = shoot(profile, alpha, kappa * kappa, opts);
  const cplx ep = std::exp(I * kappa);
  const cplx em = std::exp(-I * kappa);

  // Unknowns (R, A, B, T); rows: value and slope at x = -eps, then at x = +eps.
  std::array<std::array<cplx, 4>, 4> a{{
      {-ep, 1.0, 0.0, 0.0},
      {I * kappa * ep, 0.0, 1.0, 0.0},
      {0.0, d.u1, d.v1, -ep},
      {0.0, d.du1, d.dv1, -I * kappa * ep},
  }};
  std::array<cplx, 4> rhs{em, I * kappa * em, 0.0, 0.0};
  const auto x = solve4(a, rhs);
  return {x[0], x[3], Regime::FiniteEpsilon};
}

double q_factor(const PotentialProfile& profile, double alpha, const ShootOptions& opts) {
  const FundamentalData d = shoot(profile, alpha, 0.0, opts);
  return 2.0 * d.du1 - d.u1 - d.dv1;
}

ScatteringCoefficients asymptotic_coeffs(const PotentialProfile& profile, double alpha,
                                         double kappa, const ShootOptions& opts,
                                         double resonance_residual_tol) {
  if (!std::isfinite(kappa)) throw InvalidInput("asymptotic_coeffs: kappa must be finite");
  const FundamentalData d = shoot(profile, alpha, 0.0, opts);
  double du1 = d.du1;
  if (std::abs(du1) <= resonance_residual_tol * std::max(1.0, std::abs(d.u1))) du1 = 0.0;
  const double q = 2.0 * du1 - d.u1 - d.dv1;

  if (du1 == 0.0) {
    if (q == 0.0) throw NumericalFailure("asymptotic_coeffs: q(alpha) vanishes at a resonance");
    // The i kappa factor cancels; the leading term is kappa-independent.
    return {cplx((d.u1 - d.dv1) / q), cplx(-2.0 / q), Regime::Asymptotic};
  }
  const cplx denom = du1 + I * kappa * q;
  if (std::abs(denom) == 0.0)
    throw NumericalFailure("asymptotic_coeffs: vanishing denominator u'(1) + i kappa q");
  return {(-du1 + I * kappa * (d.u1 - d.dv1)) / denom, -2.0 * I * kappa / denom,
          Regime::Asymptotic};
}

}  // namespace deltaprime
