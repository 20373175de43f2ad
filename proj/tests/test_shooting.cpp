#include <doctest.h>

#include <cmath>

#include "deltaprime/error.hpp"
#include "deltaprime/shooting.hpp"
#include "oracles.hpp"

using namespace deltaprime;

namespace {

const std::vector<oracle::ConstPiece> kStep{{-1, 0, 1}, {0, 1, -1}};

ShootOptions rk45() {
  ShootOptions o;
  o.integrator = Integrator::DormandPrince45;
  return o;
}

void check_close(double got, double want, double tol) {
  CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_SUITE("shooting") {

TEST_CASE("free equation") {
  const auto z = builtin("zero");
  for (double k2 : {0.0, 0.25, 4.0, -1.0}) {
    CAPTURE(k2);
    const FundamentalData d = shoot(z, 3.0, k2);
    if (k2 == 0.0) {
      CHECK(d.u1 == 1.0);
      CHECK(d.du1 == 0.0);
      CHECK(d.v1 == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(d.dv1 == 1.0);
    } else if (k2 > 0) {
      const double k = std::sqrt(k2);
      check_close(d.u1, std::cos(2 * k), 1e-13);
      check_close(d.du1, -k * std::sin(2 * k), 1e-13);
      check_close(d.v1, std::sin(2 * k) / k, 1e-13);
      check_close(d.dv1, std::cos(2 * k), 1e-13);
    } else {
      const double k = std::sqrt(-k2);
      check_close(d.u1, std::cosh(2 * k), 1e-13);
      check_close(d.du1, k * std::sinh(2 * k), 1e-13);
    }
  }
}

TEST_CASE("step profile against exact transfer matrices") {
  const auto s = builtin("step");
  for (double alpha : {-40.0, -3.0, 0.5, 15.4182, 60.0}) {
    for (double k2 : {0.0, 0.3, -0.7}) {
      CAPTURE(alpha);
      CAPTURE(k2);
      const auto want = oracle::transfer(kStep, alpha, k2);
      const auto got = shoot(s, alpha, k2);
      check_close(got.u1, want.u1, 1e-11);
      check_close(got.du1, want.du1, 1e-11);
      check_close(got.v1, want.v1, 1e-11);
      check_close(got.dv1, want.dv1, 1e-11);
      const auto alt = shoot(s, alpha, k2, rk45());
      check_close(alt.u1, want.u1, 1e-8);
      check_close(alt.dv1, want.dv1, 1e-8);
    }
  }
}

TEST_CASE("Taylor and Dormand-Prince agree on seba-quadratic") {
  const auto p = builtin("seba-quadratic");
  for (double alpha : {-50.0, -5.0, 3.0, 18.17, 57.0}) {
    for (double k2 : {0.0, 0.3, -0.2}) {
      CAPTURE(alpha);
      CAPTURE(k2);
      const auto a = shoot(p, alpha, k2);
      const auto b = shoot(p, alpha, k2, rk45());
      const double scale = std::max({1.0, std::abs(a.u1), std::abs(a.du1), std::abs(a.v1),
                                     std::abs(a.dv1)});
      CHECK(std::abs(a.u1 - b.u1) <= 1e-8 * scale);
      CHECK(std::abs(a.du1 - b.du1) <= 1e-8 * scale);
      CHECK(std::abs(a.v1 - b.v1) <= 1e-8 * scale);
      CHECK(std::abs(a.dv1 - b.dv1) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("Wronskian is preserved") {
  const auto p = builtin("seba-quadratic");
  for (double alpha : {-199.0, -20.0, 0.0, 18.0, 117.0, 199.0}) {
    const auto d = shoot(p, alpha, 0.5);
    CAPTURE(alpha);
    CHECK(d.wronskian_defect <= 1e-15);
  }
  const auto s = PotentialProfile::sampled({-1, -0.3, 0.2, 1}, {0.5, -1, 2, 0});
  CHECK(shoot(s, 40.0, -0.4).wronskian_defect <= 1e-15);
}

TEST_CASE("sampled profile matches the equivalent piecewise-linear profile") {
  // psi = xi on [-1, 1] given both ways
  const auto lin = PotentialProfile::piecewise({{-1, 1, {0, 1}}});
  const auto smp = PotentialProfile::sampled({-1, 1}, {-1, 1});
  const auto a = shoot(lin, 7.0, 0.2);
  const auto b = shoot(smp, 7.0, 0.2);
  check_close(a.u1, b.u1, 1e-14);
  check_close(a.dv1, b.dv1, 1e-14);
}

TEST_CASE("profile with partial support") {
  // psi = 1 on [-0.5, 0], else 0: exact transfer through three pieces
  const auto p = PotentialProfile::piecewise({{-0.5, 0.0, {1.0}}});
  const auto want = oracle::transfer({{-1, -0.5, 0}, {-0.5, 0, 1}, {0, 1, 0}}, 12.0, 0.8);
  const auto got = shoot(p, 12.0, 0.8);
  check_close(got.u1, want.u1, 1e-12);
  check_close(got.v1, want.v1, 1e-12);
}

TEST_CASE("neumann mismatch is u'(1) at kappa = 0") {
  const auto p = builtin("seba-quadratic");
  CHECK(neumann_mismatch(p, 12.5) == shoot(p, 12.5, 0.0).du1);
  CHECK(neumann_mismatch(p, 0.0) == 0.0);
}

TEST_CASE("errors") {
  const auto p = builtin("seba-quadratic");
  CHECK_THROWS_AS(shoot(p, NAN, 0.0), InvalidInput);
  CHECK_THROWS_AS(shoot(p, 1.0, INFINITY), InvalidInput);
  ShootOptions tiny;
  tiny.max_steps = 1;
  CHECK_THROWS_AS(shoot(p, 500.0, 0.0, tiny), NumericalFailure);
  ShootOptions tiny_rk = rk45();
  tiny_rk.max_steps = 5;
  CHECK_THROWS_AS(shoot(p, 500.0, 0.0, tiny_rk), NumericalFailure);
}

}  // TEST_SUITE
