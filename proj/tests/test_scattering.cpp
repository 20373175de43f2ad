#include <doctest.h>

#include <cmath>

#include "deltaprime/error.hpp"
#include "deltaprime/scattering.hpp"
#include "oracles.hpp"

using namespace deltaprime;

TEST_SUITE("scattering") {

TEST_CASE("limit coefficients") {
  auto s = limit_coeffs(Resonant{1.0, 0.0});
  CHECK(std::abs(s.R) == 0.0);
  CHECK(s.T == std::complex<double>(1.0));
  CHECK(s.regime == Regime::Limit);
  s = limit_coeffs(NonResonant{});
  CHECK(s.R == std::complex<double>(-1.0));
  CHECK(s.T == std::complex<double>(0.0));
  for (double th : {-1e6, -54.9, -0.3, 0.01, 2.0, 755821.0}) {
    s = limit_coeffs(Resonant{th, 1.0});
    CHECK(std::norm(s.R) + std::norm(s.T) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(to_string(Regime::FiniteEpsilon) == "finite-eps");
  CHECK(to_string(Regime::Asymptotic) == "asymptotic");
  CHECK(to_string(Regime::Limit) == "limit");
}

TEST_CASE("finite-eps coefficients are unitary") {
  for (const char* name : {"seba-quadratic", "step"}) {
    const auto p = builtin(name);
    for (double alpha : {-60.0, -18.1747, 0.0, 5.0, 18.1747, 57.149}) {
      for (double k : {0.5, 1.0, 3.0}) {
        for (double eps : {0.1, 0.01, 1e-3}) {
          const auto s = finite_coeffs(p, alpha, k, eps);
          CAPTURE(name);
          CAPTURE(alpha);
          CHECK(std::abs(std::norm(s.R) + std::norm(s.T) - 1.0) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("alpha = 0 removes the potential") {
  for (const char* name : {"seba-quadratic", "step"}) {
    const auto s = finite_coeffs(builtin(name), 0.0, 1.0, 0.1);
    CHECK(std::abs(s.R) <= 1e-14);
    CHECK(std::abs(s.T - 1.0) <= 1e-14);
  }
  CHECK(q_factor(builtin("seba-quadratic"), 0.0) == -2.0);
}

TEST_CASE("non-resonant reflection tends to -1 linearly") {
  const auto p = builtin("seba-quadratic");
  const double a = std::abs(finite_coeffs(p, 10.0, 1.0, 1e-2).R + 1.0);
  const double b = std::abs(finite_coeffs(p, 10.0, 1.0, 1e-3).R + 1.0);
  CHECK(a / b >= 8.0);
  CHECK(a / b <= 12.0);
}

TEST_CASE("free line is transparent") {
  const auto s = finite_coeffs(builtin("zero"), 7.0, 2.0, 0.1);
  CHECK(std::abs(s.R) <= 1e-13);
  CHECK(std::abs(s.T - 1.0) <= 1e-13);
}

TEST_CASE("step potential against the exact transfer matrix") {
  // With boundary data from the oracle, T = 2 i kappa e^{-2 i kappa} /
  // (i kappa (u + v') - u' + kappa^2 v).
  const double alpha = 9.0, k = 2.0, eps = 0.2, kappa = k * eps;
  const auto d = oracle::transfer({{-1, 0, 1}, {0, 1, -1}}, alpha, kappa * kappa);
  const std::complex<double> I(0, 1);
  const auto want = 2.0 * I * kappa * std::exp(-2.0 * I * kappa) /
                    (I * kappa * (d.u1 + d.dv1) - d.du1 + kappa * kappa * d.v1);
  const auto got = finite_coeffs(builtin("step"), alpha, k, eps);
  CHECK(std::abs(got.T - want) <= 1e-12);
}

TEST_CASE("resonant transmission approaches the limit") {
  const auto p = builtin("seba-quadratic");
  const auto s = finite_coeffs(p, 18.1747, 1.0, 1e-3);
  CHECK(oracle::rel_err(std::norm(s.T), 0.00132) <= 0.01);
}

TEST_CASE("non-resonant transmission vanishes linearly") {
  const auto p = builtin("seba-quadratic");
  double prev = std::abs(finite_coeffs(p, 10.0, 1.0, 0.04).T);
  for (double eps : {0.02, 0.01, 0.005}) {
    const double t = std::abs(finite_coeffs(p, 10.0, 1.0, eps).T);
    CHECK(prev / t >= 1.8);
    CHECK(prev / t <= 2.2);
    prev = t;
  }
}

TEST_CASE("q factor at resonances") {
  const auto p = builtin("seba-quadratic");
  for (const auto& r : find_resonances(p, 1, 120, 0.5)) {
    const double want = -(r.theta + 1.0 / r.theta);
    CHECK(oracle::rel_err(q_factor(p, r.alpha), want) <= 1e-8);
  }
  const double m = oracle::step_m();
  const auto step = find_resonances(builtin("step"), 10, 20, 0.5);
  REQUIRE(step.size() == 1);
  CHECK(std::abs(step[0].alpha - m * m) <= 1e-8);
  const double th = oracle::step_theta(m);
  CHECK(oracle::rel_err(q_factor(builtin("step"), step[0].alpha), -(th + 1.0 / th)) <= 1e-8);
}

TEST_CASE("asymptotic expansion") {
  const auto p = builtin("seba-quadratic");
  for (double alpha : {18.1747, 10.0, -3.0}) {
    const auto a = asymptotic_coeffs(p, alpha, 0.01);
    const auto f = finite_coeffs(p, alpha, 1.0, 0.01);
    CAPTURE(alpha);
    CHECK(std::abs(a.T - f.T) <= 1e-3);
    if (alpha != 18.1747) CHECK(std::abs(a.R - f.R) <= 1e-3);
    CHECK(a.regime == Regime::Asymptotic);
  }
  const auto nr = asymptotic_coeffs(p, 10.0, 0.0);
  CHECK(nr.R == std::complex<double>(-1.0));
  CHECK(nr.T == std::complex<double>(0.0));
  // at a refined root the expansion reduces to the limit
  const auto r = find_resonances(p, 50, 60, 0.5).at(0);
  const auto a = asymptotic_coeffs(p, r.alpha, 1e-4);
  const auto l = limit_coeffs(Resonant{r.theta, r.alpha});
  CHECK(std::abs(a.T - l.T) <= 1e-9);
  CHECK(std::abs(a.R - l.R) <= 1e-9);
  CHECK_THROWS_AS(asymptotic_coeffs(p, 1.0, NAN), InvalidInput);
}

TEST_CASE("reciprocity under mirroring") {
  const auto p = builtin("seba-quadratic");
  for (double alpha : {18.1747, 7.0}) {
    const auto a = finite_coeffs(p, alpha, 1.3, 0.05);
    const auto b = finite_coeffs(p.mirrored(), alpha, 1.3, 0.05);
    CHECK(std::abs(a.T - b.T) <= 1e-10);
    CHECK(std::abs(std::abs(a.R) - std::abs(b.R)) <= 1e-10);
  }
}

TEST_CASE("invalid arguments") {
  const auto p = builtin("step");
  CHECK_THROWS_AS(finite_coeffs(p, 1.0, 0.0, 0.1), InvalidInput);
  CHECK_THROWS_AS(finite_coeffs(p, 1.0, 1.0, -0.1), InvalidInput);
  CHECK_THROWS_AS(finite_coeffs(p, 1.0, NAN, 0.1), InvalidInput);
}

}  // TEST_SUITE
