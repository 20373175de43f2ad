#include "deltaprime/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bracket_root.hpp"
#include "deltaprime/error.hpp"
#include "deltaprime/parallel.hpp"
#include "shooting_detail.hpp"

namespace deltaprime {

namespace {

using detail::Wide;

// Machine epsilon of the 113-bit significand.
const Wide kWideEps = Wide(1.925929944387236e-34);

Wide mismatch_wide(const PotentialProfile& profile, Wide alpha, const ResonanceOptions& opts) {
  return detail::shoot_wide(profile, alpha, 0, opts.shoot).du1;
}

bool within_residual(double du1, double u1) {
  return std::abs(du1) <= 1e-8 * std::max(1.0, std::abs(u1));
}

ResonantValue refine(const PotentialProfile& profile, double lo, double hi,
                     const ResonanceOptions& opts) {
  auto g = [&](Wide a) { return mismatch_wide(profile, a, opts); };
  Wide root = lo;
  if (lo != hi) {
    auto r = detail::brent_root<Wide>(g, Wide(lo), Wide(hi), g(Wide(lo)), g(Wide(hi)),
                                      Wide(opts.xtol), kWideEps, opts.max_iter);
    root = r.root;
  }
  detail::WideData data = detail::shoot_wide(profile, root, 0, opts.shoot);
  ResonantValue rv;
  rv.alpha = static_cast<double>(root);
  rv.theta = static_cast<double>(data.u1);
  rv.residual = static_cast<double>(detail::wabs(data.du1));
  rv.bracket = {lo, hi};
  rv.boundary = detail::narrow(data);
  if (!within_residual(rv.boundary.du1, rv.theta) || !std::isfinite(rv.theta) ||
      rv.theta == 0.0) {
    std::ostringstream msg;
    msg << "resonance refinement in [" << lo << ", " << hi << "] failed: residual "
        << rv.residual << " at alpha = " << rv.alpha;
    throw NumericalFailure(msg.str());
  }
  return rv;
}

ResonantValue analytic_zero() {
  ResonantValue rv;
  rv.alpha = 0.0;
  rv.theta = 1.0;
  rv.residual = 0.0;
  rv.bracket = {0.0, 0.0};
  rv.boundary = {1.0, 0.0, 2.0, 1.0, 0.0};
  return rv;
}

std::vector<double> scan_grid(double alpha_min, double alpha_max, double scan_step) {
  const double span = (alpha_max - alpha_min) / scan_step;
  if (span > 1e7) throw InvalidInput("find_resonances: scan grid exceeds 1e7 points");
  const auto n = static_cast<std::size_t>(std::ceil(span - 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double a = alpha_min + static_cast<double>(i) * scan_step;
    if (std::abs(a) >= scan_step / 2) grid.push_back(a);
  }
  if (std::abs(alpha_max) >= scan_step / 2) grid.push_back(alpha_max);
  return grid;
}

// Parabola through three equally spaced samples of one sign; true when its
// vertex crosses zero, i.e. a root pair may hide between grid points.
bool hidden_crossing(double gm, double g0, double gp) {
  if ((gm > 0) != (g0 > 0) || (gp > 0) != (g0 > 0)) return false;
  if (!(std::abs(g0) < std::abs(gm) && std::abs(g0) < std::abs(gp))) return false;
  double curv = gp - 2.0 * g0 + gm;
  if (curv == 0.0) return false;
  double vertex = g0 - (gp - gm) * (gp - gm) / (8.0 * curv);
  return (vertex > 0) != (g0 > 0) || vertex == 0.0;
}

}  // namespace

std::vector<ResonantValue> find_resonances(const PotentialProfile& profile, double alpha_min,
                                           double alpha_max, double scan_step,
                                           const ResonanceOptions& opts,
                                           std::vector<ScanWarning>* warnings) {
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || !(alpha_min < alpha_max))
    throw InvalidInput("find_resonances: requires finite alpha_min < alpha_max");
  if (!std::isfinite(scan_step) || !(scan_step > 0.0))
    throw InvalidInput("find_resonances: scan_step must be positive");

  // With psi == 0 the equation does not depend on alpha at all; only the
  // analytic entry at 0 is reported.
  if (profile.identically_zero()) {
    if (alpha_min <= 0.0 && alpha_max >= 0.0) return {analytic_zero()};
    return {};
  }

  const std::vector<double> grid = scan_grid(alpha_min, alpha_max, scan_step);
  std::vector<double> g(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    g[i] = static_cast<double>(mismatch_wide(profile, grid[i], opts));
  });

  // Consecutive grid points on opposite sides of the excluded zone around 0
  // are not compared: g has a double zero there for delta'-like profiles.
  auto straddles_zero = [](double a, double b) { return a < 0.0 && b > 0.0; };

  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (g[i] == 0.0) {
      brackets.emplace_back(grid[i], grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && g[i + 1] != 0.0 && (g[i] > 0) != (g[i + 1] > 0) &&
        !straddles_zero(grid[i], grid[i + 1])) {
      brackets.emplace_back(grid[i], grid[i + 1]);
    }
    if (warnings != nullptr && i > 0 && i + 1 < grid.size() &&
        !straddles_zero(grid[i - 1], grid[i]) && !straddles_zero(grid[i], grid[i + 1]) &&
        hidden_crossing(g[i - 1], g[i], g[i + 1])) {
      std::ostringstream msg;
      msg << "g(alpha) nearly touches zero near alpha = " << grid[i]
          << " without a sign change; a root pair may be missed (reduce the scan step)";
      warnings->push_back({grid[i], msg.str()});
    }
  }

  std::vector<ResonantValue> found(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t i) {
    found[i] = refine(profile, brackets[i].first, brackets[i].second, opts);
  });
  if (alpha_min <= 0.0 && alpha_max >= 0.0) found.push_back(analytic_zero());

  std::sort(found.begin(), found.end(),
            [](const ResonantValue& a, const ResonantValue& b) { return a.alpha < b.alpha; });
  std::vector<ResonantValue> out;
  for (auto& rv : found) {
    if (!out.empty() && rv.alpha - out.back().alpha < scan_step / 10) {
      if (rv.alpha == 0.0) out.back() = rv;  // keep the analytic entry
      continue;
    }
    out.push_back(rv);
  }
  return out;
}

double coupling(const PotentialProfile& profile, double alpha, double residual_tol,
                const ShootOptions& opts) {
  FundamentalData d = shoot(profile, alpha, 0.0, opts);
  if (!(std::abs(d.du1) <= residual_tol * std::max(1.0, std::abs(d.u1)))) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is not resonant: |u'(1)| = " << std::abs(d.du1)
        << " exceeds " << residual_tol << " * max(1, |u(1)|)";
    throw NotResonant(msg.str());
  }
  return d.u1;
}

Classification classify(const PotentialProfile& profile, double alpha, double tol,
                        const ResonanceOptions& opts) {
  if (!std::isfinite(alpha)) throw InvalidInput("classify: alpha must be finite");
  if (!std::isfinite(tol) || !(tol > 0.0)) throw InvalidInput("classify: tol must be positive");
  if (std::abs(alpha) <= tol) return Resonant{1.0, 0.0};
  if (profile.identically_zero()) return NonResonant{};

  constexpr int kPieces = 16;
  std::vector<double> pts(kPieces + 1);
  for (int i = 0; i <= kPieces; ++i)
    pts[static_cast<std::size_t>(i)] = alpha - tol + 2.0 * tol * i / kPieces;
  pts[kPieces / 2] = alpha;
  std::vector<Wide> g(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) g[i] = mismatch_wide(profile, pts[i], opts);

  std::vector<ResonantValue> roots;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (g[i] == 0) {
      roots.push_back(refine(profile, pts[i], pts[i], opts));
    } else if (i + 1 < pts.size() && g[i + 1] != 0 && (g[i] > 0) != (g[i + 1] > 0)) {
      roots.push_back(refine(profile, pts[i], pts[i + 1], opts));
    }
  }
  const ResonantValue* best = nullptr;
  for (const auto& r : roots) {
    if (std::abs(r.alpha - alpha) > tol) continue;
    if (best == nullptr || std::abs(r.alpha - alpha) < std::abs(best->alpha - alpha)) best = &r;
  }
  if (best == nullptr) return NonResonant{};
  return Resonant{best->theta, best->alpha};
}

}  // namespace deltaprime
