#include "deltaprime/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "deltaprime/error.hpp"
#include "deltaprime/parallel.hpp"

namespace deltaprime {

namespace {

using cplx = std::complex<double>;
constexpr int kB = DiscreteOperator::kBand;

// LU factorisation with partial pivoting of op - k2 I, kept in band form.
// Row i stores columns [i - kB, i + 2 kB]; pivoting widens U to 2 kB above
// the diagonal.
class BandLU {
 public:
  static constexpr int kWidth = 3 * kB + 1;

  BandLU(const DiscreteOperator& op, cplx k2) : n_(op.size()), a_(n_), perm_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      a_[i].fill(0.0);
      for (int d = -kB; d <= kB; ++d) a_[i][static_cast<std::size_t>(d + kB)] = op.rows[i][d + kB];
      a_[i][kB] -= k2;
    }
    for (std::size_t c = 0; c < n_; ++c) {
      const std::size_t last = std::min(n_ - 1, c + kB);
      std::size_t p = c;
      for (std::size_t r = c + 1; r <= last; ++r)
        if (std::abs(at(r, c)) > std::abs(at(p, c))) p = r;
      if (at(p, c) == 0.0) {
        std::ostringstream msg;
        msg << "resolvent: zero pivot in column " << c;
        throw NumericalFailure(msg.str());
      }
      perm_[c] = p;
      const std::size_t right = std::min(n_ - 1, c + 2 * kB);
      if (p != c)
        for (std::size_t j = c; j <= right; ++j) std::swap(at(p, j), at(c, j));
      const cplx pivot = at(c, c);
      for (std::size_t r = c + 1; r <= last; ++r) {
        const cplx l = at(r, c) / pivot;
        at(r, c) = l;
        if (l == 0.0) continue;
        for (std::size_t j = c + 1; j <= right; ++j) at(r, j) -= l * at(c, j);
      }
    }
  }

  std::vector<cplx> solve(std::vector<cplx> b) const {
    for (std::size_t c = 0; c < n_; ++c) {
      if (perm_[c] != c) std::swap(b[c], b[perm_[c]]);
      const std::size_t last = std::min(n_ - 1, c + kB);
      for (std::size_t r = c + 1; r <= last; ++r) b[r] -= at(r, c) * b[c];
    }
    for (std::size_t i = n_; i-- > 0;) {
      cplx acc = b[i];
      const std::size_t right = std::min(n_ - 1, i + 2 * kB);
      for (std::size_t j = i + 1; j <= right; ++j) acc -= at(i, j) * b[j];
      b[i] = acc / at(i, i);
    }
    return b;
  }

 private:
  cplx& at(std::size_t i, std::size_t j) { return a_[i][j + kB - i]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a_[i][j + kB - i]; }

  std::size_t n_;
  std::vector<std::array<cplx, kWidth>> a_;
  std::vector<std::size_t> perm_;
};

using lcplx = std::complex<long double>;

// f - (op - k2) x in extended precision.
std::vector<lcplx> residual(const DiscreteOperator& op, cplx k2, const std::vector<cplx>& x,
                            const std::vector<cplx>& f) {
  const std::size_t n = op.size();
  std::vector<lcplx> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    lcplx acc = lcplx(f[i]) + lcplx(k2) * lcplx(x[i]);
    for (int d = -kB; d <= kB; ++d) {
      const double v = op.rows[i][d + kB];
      if (v == 0.0) continue;
      acc -= static_cast<long double>(v) * lcplx(x[i + static_cast<std::size_t>(d)]);
    }
    r[i] = acc;
  }
  return r;
}

double inf_norm(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

std::vector<cplx> solve_checked(const DiscreteOperator& op, const BandLU& lu, cplx k2,
                                const std::vector<cplx>& f) {
  std::vector<cplx> x = lu.solve(f);
  // One step of iterative refinement with an extended-precision residual.
  std::vector<lcplx> r = residual(op, k2, x, f);
  std::vector<cplx> rd(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) rd[i] = cplx(r[i]);
  std::vector<cplx> dx = lu.solve(rd);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];

  r = residual(op, k2, x, f);
  long double rn = 0.0L;
  for (const auto& z : r) rn = std::max(rn, std::abs(z));
  double anorm = 0.0;
  for (const auto& row : op.rows) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    anorm = std::max(anorm, s);
  }
  anorm += std::abs(k2);
  const double scale = anorm * inf_norm(x) + inf_norm(f);
  if (scale > 0.0 && static_cast<double>(rn) > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "resolvent: relative backward error " << static_cast<double>(rn) / scale
        << " exceeds 1e-12";
    throw NumericalFailure(msg.str());
  }
  return x;
}

void check_spectral_parameter(cplx k2) {
  if (!std::isfinite(k2.real()) || !std::isfinite(k2.imag()) || k2.imag() == 0.0)
    throw InvalidInput("resolvent: k^2 must have a nonzero imaginary part");
}

DiscreteOperator free_laplacian(const Grid& grid) {
  grid.validate();
  DiscreteOperator op;
  op.grid = grid;
  const double ih2 = 1.0 / (grid.h() * grid.h());
  op.rows.resize(grid.N);
  for (std::size_t i = 0; i < grid.N; ++i) {
    op.rows[i].fill(0.0);
    op.rows[i][kB] = 2.0 * ih2;
    if (i > 0) op.rows[i][kB - 1] = -ih2;
    if (i + 1 < grid.N) op.rows[i][kB + 1] = -ih2;
  }
  return op;
}

}  // namespace

void Grid::validate() const {
  if (!std::isfinite(L) || !(L > 1.0)) throw InvalidInput("grid: L must exceed 1");
  if (N < 64) throw InvalidInput("grid: N must be at least 64");
  if (N % 2 != 0) throw InvalidInput("grid: N must be even so that 0 lies between nodes");
}

Grid grid_for(double L, double eps_min, double per_eps) {
  if (!(eps_min > 0.0) || !(per_eps > 0.0)) throw InvalidInput("grid: eps and density must be positive");
  auto n = static_cast<std::size_t>(std::ceil(2.0 * L * per_eps / eps_min));  // N + 1 >= 2L/h
  if (n % 2 != 0) ++n;
  Grid g{L, std::max<std::size_t>(n, 64)};
  g.validate();
  return g;
}

double DiscreteOperator::at(std::size_t i, std::size_t j) const {
  const auto d = static_cast<long>(j) - static_cast<long>(i);
  if (d < -kBand || d > kBand) return 0.0;
  return rows[i][static_cast<std::size_t>(d + kBand)];
}

std::vector<cplx> DiscreteOperator::apply(const std::vector<cplx>& x) const {
  if (x.size() != size()) throw InvalidInput("operator: vector size mismatch");
  std::vector<cplx> y(size());
  for (std::size_t i = 0; i < size(); ++i) {
    cplx acc = 0.0;
    for (int d = -kBand; d <= kBand; ++d) {
      const double v = rows[i][static_cast<std::size_t>(d + kBand)];
      if (v != 0.0) acc += v * x[i + static_cast<std::size_t>(d)];
    }
    y[i] = acc;
  }
  return y;
}

DiscreteOperator discretize_seps(const PotentialProfile& profile, double alpha, double eps,
                                 const Grid& grid) {
  grid.validate();
  if (!std::isfinite(eps) || !(eps > 0.0)) throw InvalidInput("discretize_seps: eps must be positive");
  if (!std::isfinite(alpha)) throw InvalidInput("discretize_seps: alpha must be finite");
  if (eps / grid.h() < 16.0 * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "discretize_seps: eps / h = " << eps / grid.h()
        << " < 16; the inner structure is not resolved (increase N)";
    throw InvalidInput(msg.str());
  }
  DiscreteOperator op = free_laplacian(grid);
  op.kind = OperatorKind::Seps;
  op.alpha = alpha;
  op.eps = eps;
  const double strength = alpha / (eps * eps);
  for (std::size_t i = 0; i < grid.N; ++i) {
    const double xi = grid.node(i) / eps;
    if (xi < -1.0 || xi > 1.0) continue;
    op.rows[i][kB] += strength * profile(xi);
  }
  return op;
}

DiscreteOperator discretize_limit(const Classification& c, const Grid& grid) {
  DiscreteOperator op = free_laplacian(grid);
  const std::size_t m = grid.left_of_origin();  // x = -h/2; m + 1 is x = +h/2
  const double ih2 = 1.0 / (grid.h() * grid.h());
  auto& left = op.rows[m];
  auto& right = op.rows[m + 1];

  if (const auto* res = std::get_if<Resonant>(&c)) {
    // Ghost values gL ~ y_left(h/2), gR ~ y_right(-h/2) solve
    //   yR(0) = theta yL(0),  theta yR'(0) = yL'(0)
    // with y(0) from the quadratic through the two nearest nodes and the ghost,
    // y'(0) from the centred difference across the origin:
    //   gL = [th^2 y_{m-1} + (3 - 6 th^2) y_m + 9 th y_{m+1} - th y_{m+2}] / (3 (1 + th^2))
    //   gR = [-th y_{m-1} + 9 th y_m + (3 th^2 - 6) y_{m+1} + y_{m+2}] / (3 (1 + th^2))
    const double th = res->theta;
    op.kind = OperatorKind::Coupled;
    op.theta = th;
    const double den = 3.0 * (1.0 + th * th);
    // row m: (-y_{m-1} + 2 y_m - gL) / h^2
    left[kB - 1] = ih2 * (-1.0 - th * th / den);
    left[kB] = ih2 * (2.0 - (3.0 - 6.0 * th * th) / den);
    left[kB + 1] = ih2 * (-9.0 * th / den);
    left[kB + 2] = ih2 * (th / den);
    // row m + 1: (-gR + 2 y_{m+1} - y_{m+2}) / h^2
    right[kB - 2] = ih2 * (th / den);
    right[kB - 1] = ih2 * (-9.0 * th / den);
    right[kB] = ih2 * (2.0 - (3.0 * th * th - 6.0) / den);
    right[kB + 1] = ih2 * (-1.0 - 1.0 / den);
  } else {
    // y(0) = 0 from each side: ghost g = (y_{far} - 6 y_{near}) / 3.
    op.kind = OperatorKind::DirichletPair;
    left[kB - 1] = -4.0 / 3.0 * ih2;
    left[kB] = 4.0 * ih2;
    left[kB + 1] = 0.0;
    right[kB - 1] = 0.0;
    right[kB] = 4.0 * ih2;
    right[kB + 1] = -4.0 / 3.0 * ih2;
  }
  return op;
}

std::vector<cplx> resolvent_apply(const DiscreteOperator& op, cplx k2, const std::vector<cplx>& f) {
  check_spectral_parameter(k2);
  if (f.size() != op.size()) throw InvalidInput("resolvent: vector size mismatch");
  BandLU lu(op, k2);
  return solve_checked(op, lu, k2, f);
}

double mesh_norm(const std::vector<cplx>& x, double h) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(h * s);
}

std::vector<std::vector<cplx>> default_test_functions(const Grid& grid) {
  grid.validate();
  auto sample = [&](auto&& fn) {
    std::vector<cplx> v(grid.N);
    for (std::size_t i = 0; i < grid.N; ++i) v[i] = fn(grid.node(i));
    const double n = mesh_norm(v, grid.h());
    for (auto& z : v) z /= n;
    return v;
  };
  auto gauss = [](double c) {
    return [c](double x) { return std::exp(-(x - c) * (x - c) / (2.0 * 0.25)); };
  };
  auto bump = [](double x) {
    const double t = (x - 1.0) / 0.5;
    return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  };
  return {sample(gauss(-1.0)), sample(gauss(1.0)), sample(bump)};
}

double fit_rate(const std::vector<ConvergenceEntry>& entries) {
  if (entries.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(entries.size());
  for (const auto& e : entries) {
    const double x = std::log(e.eps);
    const double y = std::log(std::max(e.error, std::numeric_limits<double>::min()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport study(const PotentialProfile& profile, double alpha,
                        const std::vector<double>& eps_list, const Grid& grid, cplx k2,
                        const std::vector<std::vector<cplx>>& test_functions,
                        const StudyOptions& opts) {
  grid.validate();
  check_spectral_parameter(k2);
  if (profile.identically_zero())
    throw InvalidInput("study: the zero profile has no zero-range limit to compare against");
  if (eps_list.empty()) throw InvalidInput("study: eps list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!std::isfinite(eps_list[i]) || !(eps_list[i] > 0.0))
      throw InvalidInput("study: eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw InvalidInput("study: eps list must be strictly decreasing");
  }
  if (test_functions.empty()) throw InvalidInput("study: no test functions");
  const double h = grid.h();
  std::vector<double> fnorm;
  for (const auto& f : test_functions) {
    if (f.size() != grid.N) throw InvalidInput("study: test function size does not match grid");
    fnorm.push_back(mesh_norm(f, h));
    if (!(fnorm.back() > 0.0)) throw InvalidInput("study: test functions must be nonzero");
  }
  // Fail on resolution before doing any work.
  for (double eps : eps_list) {
    if (eps / h < 16.0 * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "study: eps = " << eps << " gives eps / h = " << eps / h << " < 16";
      throw InvalidInput(msg.str());
    }
  }

  ConvergenceReport report;
  report.grid = grid;
  report.limit_kind = opts.force_limit ? *opts.force_limit
                                       : classify(profile, alpha, opts.classify_tol, opts.resonance);

  const DiscreteOperator limit_op = discretize_limit(report.limit_kind, grid);
  const BandLU limit_lu(limit_op, k2);
  std::vector<std::vector<cplx>> reference;
  for (const auto& f : test_functions) reference.push_back(solve_checked(limit_op, limit_lu, k2, f));

  report.entries.resize(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t e) {
    const DiscreteOperator op = discretize_seps(profile, alpha, eps_list[e], grid);
    const BandLU lu(op, k2);
    double worst = 0.0;
    for (std::size_t t = 0; t < test_functions.size(); ++t) {
      std::vector<cplx> y = solve_checked(op, lu, k2, test_functions[t]);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= reference[t][i];
      worst = std::max(worst, mesh_norm(y, h) / fnorm[t]);
    }
    report.entries[e] = {eps_list[e], worst};
  });
  report.fitted_rate = fit_rate(report.entries);
  return report;
}

}  // namespace deltaprime
