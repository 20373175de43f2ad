#pragma once

#include <cmath>
#include <utility>

#include "deltaprime/error.hpp"

namespace deltaprime::detail {

template <class Real>
struct BracketResult {
  Real root;
  Real value;  // f(root)
  Real lo;     // final bracket
  Real hi;
  int iterations;
};

/// Brent's method: bisection safeguarding secant and inverse quadratic steps.
/// Requires f(a) and f(b) of opposite sign (or one of them zero); every
/// iterate stays inside the current bracket. Stops when the bracket half-width
/// drops below 2 eps |b| + xtol / 2, or after max_iter evaluations (the best
/// iterate is returned either way; callers judge it by its residual).
template <class Real, class F>
BracketResult<Real> brent_root(F&& f, Real a, Real b, Real fa, Real fb, Real xtol, Real eps,
                               int max_iter) {
  auto abs_ = [](Real x) { return x < 0 ? -x : x; };
  if (fa == 0) return {a, fa, a, a, 0};
  if (fb == 0) return {b, fb, b, b, 0};
  if ((fa > 0) == (fb > 0)) throw InvalidInput("brent_root: endpoints do not bracket a root");

  Real c = b, fc = fb, d = b - a, e = d;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (abs_(fc) < abs_(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const Real tol1 = 2 * eps * abs_(b) + xtol / 2;
    const Real xm = (c - b) / 2;
    if (abs_(xm) <= tol1 || fb == 0) {
      return {b, fb, b < c ? b : c, b < c ? c : b, iter};
    }
    if (abs_(e) >= tol1 && abs_(fa) > abs_(fb)) {
      Real p, q, r;
      const Real s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = abs_(p);
      const Real min1 = 3 * xm * q - abs_(tol1 * q);
      const Real min2 = abs_(e * q);
      if (2 * p < (min1 < min2 ? min1 : min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += abs_(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  return {b, fb, b < c ? b : c, b < c ? c : b, max_iter};
}

}  // namespace deltaprime::detail
