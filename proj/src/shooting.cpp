#include "deltaprime/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "deltaprime/error.hpp"
#include "shooting_detail.hpp"

namespace deltaprime {

namespace detail {

namespace {

// psi restricted to one integration interval, as a polynomial in (xi - origin).
template <class Real>
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  Real origin = 0;
  std::vector<Real> coeffs;

  Real operator()(Real xi) const {
    Real t = xi - origin;
    Real acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
};

template <class Real>
std::vector<Piece<Real>> pieces_on_unit_interval(const PotentialProfile& profile) {
  std::vector<Piece<Real>> out;
  auto gap = [&](double lo, double hi) {
    if (lo < hi) out.push_back({lo, hi, Real(0), {}});
  };
  gap(-1.0, profile.support_min());
  if (profile.kind() == PotentialProfile::Kind::Sampled) {
    const auto& x = profile.nodes();
    const auto& y = profile.values();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      Real slope = (Real(y[i + 1]) - Real(y[i])) / (Real(x[i + 1]) - Real(x[i]));
      out.push_back({x[i], x[i + 1], Real(x[i]), {Real(y[i]), slope}});
    }
  } else {
    for (const auto& s : profile.segments()) {
      out.push_back({s.a, s.b, Real(0), std::vector<Real>(s.coeffs.begin(), s.coeffs.end())});
    }
  }
  gap(profile.support_max(), 1.0);
  return out;
}

[[noreturn]] void fail(const char* what, double x, double alpha, double kappa2) {
  std::ostringstream msg;
  msg << "shooting: " << what << " at xi = " << x << " (alpha = " << alpha
      << ", kappa^2 = " << kappa2 << ")";
  throw NumericalFailure(msg.str());
}

// ---------------------------------------------------------------------------
// Taylor series integrator.
//
// On each step w'' = Q(xi0 + t) w with Q a polynomial, so the scaled Taylor
// coefficients s_n = c_n h^n obey
//   s_{n+2} = sum_j (q_j h^{j+2}) s_{n-j} / ((n+1)(n+2)).
// The step is chosen so that sum_j |q_j| h^{j+2} <= kRho, which makes the
// terms decay factorially; the series is summed until it is exhausted at
// 113-bit precision.

constexpr double kRho = 4.0;
constexpr int kMaxTerms = 160;

class TaylorIntegrator {
 public:
  TaylorIntegrator(Wide alpha, Wide kappa2, long max_steps)
      : alpha_(alpha), kappa2_(kappa2), max_steps_(max_steps) {}

  void run(const Piece<Wide>& piece, std::array<Wide, 4>& y) {
    Wide x = piece.lo;
    const Wide end = piece.hi;
    const std::size_t deg = piece.coeffs.size();
    std::vector<Wide> q(std::max<std::size_t>(deg, 1));
    while (x < end) {
      expand(piece, x, q);
      Wide remaining = end - x;
      double hmax = max_step(q);
      if (static_cast<double>(remaining) / hmax > static_cast<double>(max_steps_ - steps_))
        fail("step budget exhausted", static_cast<double>(x), alpha_d(), kappa2_d());
      ++steps_;
      bool last = static_cast<double>(remaining) <= hmax;
      Wide h = last ? remaining : Wide(hmax);
      step(q, h, y, static_cast<double>(x));
      x = last ? end : x + h;
    }
  }

 private:
  // q = Taylor coefficients of alpha * psi(x0 + t) - kappa^2 in t.
  void expand(const Piece<Wide>& piece, Wide x0, std::vector<Wide>& q) const {
    std::fill(q.begin(), q.end(), Wide(0));
    std::copy(piece.coeffs.begin(), piece.coeffs.end(), q.begin());
    const Wide s = x0 - piece.origin;
    const std::size_t d = piece.coeffs.size();
    for (std::size_t i = 0; i + 1 < d; ++i)
      for (std::size_t j = d - 1; j-- > i;) q[j] += s * q[j + 1];
    for (auto& c : q) c *= alpha_;
    q[0] -= kappa2_;
  }

  static double max_step(const std::vector<Wide>& q) {
    double h = std::numeric_limits<double>::infinity();
    const double share = kRho / static_cast<double>(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      double m = std::abs(static_cast<double>(q[j]));
      if (m > 0.0) h = std::min(h, std::pow(share / m, 1.0 / static_cast<double>(j + 2)));
    }
    return h;
  }

  void step(const std::vector<Wide>& q, Wide h, std::array<Wide, 4>& y, double x) {
    const std::size_t d = q.size();
    std::vector<Wide> qh(d);
    Wide hp = h * h;
    for (std::size_t j = 0; j < d; ++j) {
      qh[j] = q[j] * hp;
      hp *= h;
    }
    for (int sol = 0; sol < 2; ++sol) {
      Wide* w = &y[2 * sol];
      auto& s = terms_;
      s.assign(1, w[0]);
      s.push_back(w[1] * h);
      Wide value = s[0] + s[1];
      Wide slope = s[1];
      Wide scale = std::max(wabs(s[0]), wabs(s[1]));
      const std::size_t window = std::max<std::size_t>(2, d + 1);
      std::size_t quiet = 0;
      for (int n = 0;; ++n) {
        if (n + 2 >= kMaxTerms) fail("Taylor series did not converge", x, alpha_d(), kappa2_d());
        Wide acc = 0;
        for (std::size_t j = 0; j < d && j <= static_cast<std::size_t>(n); ++j)
          acc += qh[j] * s[static_cast<std::size_t>(n) - j];
        Wide next = acc / (Wide(n + 1) * Wide(n + 2));
        s.push_back(next);
        value += next;
        slope += Wide(n + 2) * next;
        Wide mag = wabs(next);
        if (mag > scale) scale = mag;
        quiet = (mag <= kTiny * scale) ? quiet + 1 : 0;
        if (quiet >= window) break;
      }
      w[0] = value;
      w[1] = slope / h;
    }
  }

  double alpha_d() const { return static_cast<double>(alpha_); }
  double kappa2_d() const { return static_cast<double>(kappa2_); }

  static inline const Wide kTiny = Wide(1e-36);

  Wide alpha_;
  Wide kappa2_;
  long max_steps_;
  long steps_ = 0;
  std::vector<Wide> terms_;
};

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4), double precision.

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class DormandPrince {
 public:
  using State = std::array<double, 4>;

  DormandPrince(double alpha, double kappa2, const ShootOptions& opts)
      : alpha_(alpha), kappa2_(kappa2), opts_(opts) {}

  // Advances y across the piece; `h` carries the step size between pieces.
  void run(const Piece<double>& piece, State& y, double& h) {
    double x = piece.lo;
    const double end = piece.hi;
    State k1 = rhs(piece, x, y);
    while (x < end) {
      if (++steps_ > opts_.max_steps) fail("step budget exhausted", x, alpha_, kappa2_);
      bool last = false;
      const double h_requested = h;
      if (x + h >= end) {
        h = end - x;
        last = true;
      }
      const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, std::abs(x));
      if (h < hmin) fail("step size underflow", x, alpha_, kappa2_);

      State tmp, k2, k3, k4, k5, k6, k7, ynew;
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * a21 * k1[i];
      k2 = rhs(piece, x + c2 * h, tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = rhs(piece, x + c3 * h, tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = rhs(piece, x + c4 * h, tmp);
      for (int i = 0; i < 4; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = rhs(piece, x + c5 * h, tmp);
      for (int i = 0; i < 4; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      const double xnew = last ? end : x + h;
      k6 = rhs(piece, xnew, tmp);
      for (int i = 0; i < 4; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = rhs(piece, xnew, ynew);

      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * k7[i]);
        double scale = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err)) fail("non-finite state", x, alpha_, kappa2_);

      if (err <= 1.0) {
        x = xnew;
        y = ynew;
        k1 = k7;  // first-same-as-last
        double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
        h = last ? std::max(h_requested, h * grow) : h * grow;
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
  }

 private:
  State rhs(const Piece<double>& piece, double x, const State& y) const {
    double q = alpha_ * piece(x) - kappa2_;
    return {y[1], q * y[0], y[3], q * y[2]};
  }

  double alpha_;
  double kappa2_;
  ShootOptions opts_;
  long steps_ = 0;
};

}  // namespace

WideData shoot_wide(const PotentialProfile& profile, Wide alpha, Wide kappa2,
                    const ShootOptions& opts) {
  std::array<Wide, 4> y{1, 0, 0, 1};
  TaylorIntegrator integ(alpha, kappa2, opts.max_steps);
  for (const auto& piece : pieces_on_unit_interval<Wide>(profile)) integ.run(piece, y);
  return {y[0], y[1], y[2], y[3]};
}

FundamentalData narrow(const WideData& d) {
  FundamentalData out{static_cast<double>(d.u1), static_cast<double>(d.du1),
                      static_cast<double>(d.v1), static_cast<double>(d.dv1), 0.0};
  out.wronskian_defect = static_cast<double>(wabs(d.u1 * d.dv1 - d.du1 * d.v1 - 1));
  return out;
}

}  // namespace detail

FundamentalData shoot(const PotentialProfile& profile, double alpha, double kappa2,
                      const ShootOptions& opts) {
  if (!std::isfinite(alpha) || !std::isfinite(kappa2))
    throw InvalidInput("shoot: alpha and kappa^2 must be finite");

  FundamentalData d;
  if (opts.integrator == Integrator::Taylor) {
    d = detail::narrow(detail::shoot_wide(profile, alpha, kappa2, opts));
  } else {
    detail::DormandPrince::State y{1.0, 0.0, 0.0, 1.0};
    detail::DormandPrince integ(alpha, kappa2, opts);
    double h = 1e-2;
    for (const auto& piece : detail::pieces_on_unit_interval<double>(profile)) {
      h = std::min(h, piece.hi - piece.lo);
      integ.run(piece, y, h);
    }
    d = {y[0], y[1], y[2], y[3], 0.0};
    d.wronskian_defect = std::abs(d.u1 * d.dv1 - d.du1 * d.v1 - 1.0);
  }

  if (!std::isfinite(d.u1) || !std::isfinite(d.du1) || !std::isfinite(d.v1) ||
      !std::isfinite(d.dv1) || !std::isfinite(d.wronskian_defect)) {
    std::ostringstream msg;
    msg << "shooting: non-finite boundary data (alpha = " << alpha << ", kappa^2 = " << kappa2
        << ")";
    throw NumericalFailure(msg.str());
  }
  return d;
}

double neumann_mismatch(const PotentialProfile& profile, double alpha, const ShootOptions& opts) {
  return shoot(profile, alpha, 0.0, opts).du1;
}

}  // namespace deltaprime
