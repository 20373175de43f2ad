#include "deltaprime/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "deltaprime/convergence.hpp"
#include "deltaprime/error.hpp"
#include "deltaprime/potential.hpp"
#include "deltaprime/render.hpp"
#include "deltaprime/resonance.hpp"
#include "deltaprime/scattering.hpp"
#include "deltaprime/shooting.hpp"

namespace deltaprime {

namespace {

// Alpha values are usually quoted to four decimals, which puts them ~1e-4
// away from the refined root. The command-line default is loose enough to
// recognise them; the library defaults stay strict.
constexpr double kCliResonanceTol = 1e-3;

struct Config {
  std::string format = "table";
  std::string builtin_name;
  std::string profile_path;
  bool mirror = false;

  double alpha = 0.0;
  double kappa2 = 0.0;
  std::string integrator = "taylor";
  double alpha_min = -200.0;
  double alpha_max = 200.0;
  double scan_step = 0.5;
  double tol = kCliResonanceTol;
  double k = 1.0;
  double eps = 0.0;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  double L = 20.0;
  std::size_t N = 0;
  double nodes_per_eps = kDefaultNodesPerEps;
  double k2_re = 0.0;
  double k2_im = 1.0;
  bool grid_check = false;
};

PotentialProfile profile_from(const Config& cfg) {
  if (cfg.builtin_name.empty() && cfg.profile_path.empty())
    throw InvalidInput("a profile is required: pass --builtin NAME or --profile FILE");
  PotentialProfile p =
      cfg.builtin_name.empty() ? load_profile(cfg.profile_path) : builtin(cfg.builtin_name);
  return cfg.mirror ? p.mirrored() : p;
}

ShootOptions shoot_options(const Config& cfg) {
  ShootOptions o;
  o.integrator = cfg.integrator == "dp45" ? Integrator::DormandPrince45 : Integrator::Taylor;
  return o;
}

double abs_t2(double theta) {
  return std::norm(limit_coeffs(Resonant{theta, 0.0}).T);
}

void warn_if_not_delta_prime(const PotentialProfile& p, std::ostream& err) {
  const Moments m = moments(p);
  if (!m.delta_prime_like(1e-10))
    err << "warning: profile is not delta'-like (m0 = " << m.m0 << ", m1 = " << m.m1
        << "; expected 0 and -1)\n";
}

void add_scattering(Report& r, double alpha, const ScatteringCoefficients& s) {
  r.columns = {"regime", "alpha", "R_re", "R_im", "T_re", "T_im", "abs_R2", "abs_T2"};
  r.add_row({std::string(to_string(s.regime)), alpha, s.R.real(), s.R.imag(), s.T.real(),
             s.T.imag(), std::norm(s.R), std::norm(s.T)});
}

Report cmd_moments(const Config& cfg) {
  const Moments m = moments(profile_from(cfg));
  Report r;
  r.columns = {"m0", "m1"};
  r.add_row({m.m0, m.m1});
  return r;
}

Report cmd_shoot(const Config& cfg) {
  const FundamentalData d = shoot(profile_from(cfg), cfg.alpha, cfg.kappa2, shoot_options(cfg));
  Report r;
  r.columns = {"alpha", "kappa2", "u1", "du1", "v1", "dv1", "wronskian_defect"};
  r.add_row({cfg.alpha, cfg.kappa2, d.u1, d.du1, d.v1, d.dv1, d.wronskian_defect});
  return r;
}

Report resonance_table(const std::vector<ResonantValue>& found, bool details) {
  Report r;
  r.columns = {"alpha", "theta", "abs_T2"};
  if (details) {
    r.columns.insert(r.columns.end(), {"residual", "bracket_lo", "bracket_hi"});
  }
  for (const auto& rv : found) {
    std::vector<Value> row{rv.alpha, rv.theta, abs_t2(rv.theta)};
    if (details) row.insert(row.end(), {rv.residual, rv.bracket.first, rv.bracket.second});
    r.add_row(std::move(row));
  }
  return r;
}

std::vector<ResonantValue> scan(const PotentialProfile& p, double lo, double hi, double step,
                                const ShootOptions& so, std::ostream& err) {
  ResonanceOptions ro;
  ro.shoot = so;
  std::vector<ScanWarning> warnings;
  auto found = find_resonances(p, lo, hi, step, ro, &warnings);
  for (const auto& w : warnings) err << "warning: " << w.message << '\n';
  return found;
}

Report cmd_resonances(const Config& cfg, std::ostream& err) {
  const PotentialProfile p = profile_from(cfg);
  warn_if_not_delta_prime(p, err);
  return resonance_table(
      scan(p, cfg.alpha_min, cfg.alpha_max, cfg.scan_step, shoot_options(cfg), err), true);
}

Report cmd_theta(const Config& cfg) {
  const double theta = coupling(profile_from(cfg), cfg.alpha, cfg.tol, shoot_options(cfg));
  Report r;
  r.columns = {"alpha", "theta"};
  r.add_row({cfg.alpha, theta});
  return r;
}

ResonanceOptions resonance_options(const Config& cfg) {
  ResonanceOptions ro;
  ro.shoot = shoot_options(cfg);
  return ro;
}

Report cmd_scatter_limit(const Config& cfg) {
  const Classification c = classify(profile_from(cfg), cfg.alpha, cfg.tol, resonance_options(cfg));
  Report r;
  add_scattering(r, cfg.alpha, limit_coeffs(c));
  r.columns.insert(r.columns.begin() + 2, {"resonant", "theta"});
  if (const auto* res = std::get_if<Resonant>(&c)) {
    r.rows[0].insert(r.rows[0].begin() + 2, {true, res->theta});
  } else {
    r.rows[0].insert(r.rows[0].begin() + 2, {false, std::monostate{}});
  }
  return r;
}

Report cmd_scatter_eps(const Config& cfg) {
  const auto s = finite_coeffs(profile_from(cfg), cfg.alpha, cfg.k, cfg.eps, shoot_options(cfg));
  Report r;
  add_scattering(r, cfg.alpha, s);
  r.columns.insert(r.columns.begin() + 2, {"k", "eps"});
  r.rows[0].insert(r.rows[0].begin() + 2, {cfg.k, cfg.eps});
  r.columns.push_back("unitarity_defect");
  r.rows[0].push_back(std::norm(s.R) + std::norm(s.T) - 1.0);
  return r;
}

Report cmd_scatter_asymptotic(const Config& cfg) {
  if (!(cfg.eps > 0.0) || !(cfg.k > 0.0))
    throw InvalidInput("scatter-asymptotic: --k and --eps must be positive");
  const double kappa = cfg.eps * cfg.k;
  const auto s = asymptotic_coeffs(profile_from(cfg), cfg.alpha, kappa, shoot_options(cfg), cfg.tol);
  Report r;
  add_scattering(r, cfg.alpha, s);
  r.columns.insert(r.columns.begin() + 2, {"k", "eps", "kappa"});
  r.rows[0].insert(r.rows[0].begin() + 2, {cfg.k, cfg.eps, kappa});
  return r;
}

Report cmd_converge(const Config& cfg, std::ostream& err) {
  const PotentialProfile p = profile_from(cfg);
  warn_if_not_delta_prime(p, err);
  if (cfg.eps_list.empty()) throw InvalidInput("converge: --eps-list is empty");
  const double eps_min = *std::min_element(cfg.eps_list.begin(), cfg.eps_list.end());
  Grid grid = cfg.N > 0 ? Grid{cfg.L, cfg.N} : grid_for(cfg.L, eps_min, cfg.nodes_per_eps);
  grid.validate();
  const std::complex<double> k2{cfg.k2_re, cfg.k2_im};

  StudyOptions so;
  so.classify_tol = cfg.tol;
  so.resonance = resonance_options(cfg);
  const ConvergenceReport rep = study(p, cfg.alpha, cfg.eps_list, grid, k2,
                                      default_test_functions(grid), so);
  std::optional<ConvergenceReport> fine;
  if (cfg.grid_check) {
    const Grid g2{grid.L, 2 * grid.N};
    so.force_limit = rep.limit_kind;
    fine = study(p, cfg.alpha, cfg.eps_list, g2, k2, default_test_functions(g2), so);
  }

  Report r;
  r.meta.emplace_back("alpha", cfg.alpha);
  if (const auto* res = std::get_if<Resonant>(&rep.limit_kind)) {
    r.meta.emplace_back("limit", std::string("resonant"));
    r.meta.emplace_back("theta", res->theta);
  } else {
    r.meta.emplace_back("limit", std::string("non-resonant"));
    r.meta.emplace_back("theta", std::monostate{});
  }
  r.meta.emplace_back("L", grid.L);
  r.meta.emplace_back("N", static_cast<long long>(grid.N));
  r.meta.emplace_back("h", grid.h());
  r.meta.emplace_back("k2_re", k2.real());
  r.meta.emplace_back("k2_im", k2.imag());
  r.meta.emplace_back("fitted_rate", rep.fitted_rate);
  if (fine) r.meta.emplace_back("fitted_rate_2N", fine->fitted_rate);

  r.columns = {"eps", "eps_over_h", "error"};
  if (fine) r.columns.insert(r.columns.end(), {"error_2N", "rel_change"});
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    std::vector<Value> row{e.eps, e.eps / grid.h(), e.error};
    if (fine) {
      const double e2 = fine->entries[i].error;
      row.insert(row.end(), {e2, std::abs(e2 - e.error) / e.error});
    }
    r.add_row(std::move(row));
  }
  return r;
}

Report cmd_table6(const Config& cfg, std::ostream& err) {
  if (!cfg.builtin_name.empty() || !cfg.profile_path.empty() || cfg.mirror)
    throw InvalidInput("table6 uses the fixed seba-quadratic profile; drop --builtin/--profile/--mirror");
  const PotentialProfile p = builtin("seba-quadratic");
  return resonance_table(scan(p, 0.0, 200.0, 0.5, ShootOptions{}, err), false);
}

std::string cmd_export(const Config& cfg) { return profile_to_json(profile_from(cfg)); }

CLI::Validator finite_number() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        const char* begin = s.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !std::isfinite(v)) return "expected a finite number, got '" + s + "'";
        return {};
      },
      "FINITE");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Resonances and scattering for delta'-like potentials"};
  app.name("deltaprime");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  auto* opt_builtin = app.add_option("--builtin", cfg.builtin_name, "Built-in profile")
                          ->check(CLI::IsMember(builtin_names()));
  auto* opt_profile = app.add_option("--profile", cfg.profile_path, "Profile JSON file");
  opt_builtin->excludes(opt_profile);
  app.add_flag("--mirror", cfg.mirror, "Use the reflected profile psi(-xi)");

  const auto finite = finite_number();
  auto integrator = [&](CLI::App* sub) {
    sub->add_option("--integrator", cfg.integrator, "taylor (default) or dp45")
        ->check(CLI::IsMember({"taylor", "dp45"}));
  };

  auto* moments_cmd = app.add_subcommand("moments", "Moments m0 and m1 of the profile");

  auto* shoot_cmd = app.add_subcommand("shoot", "Fundamental solutions at xi = 1");
  shoot_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  shoot_cmd->add_option("--kappa2", cfg.kappa2)->check(finite);
  integrator(shoot_cmd);

  auto* res_cmd = app.add_subcommand("resonances", "Resonant coupling constants in a window");
  res_cmd->add_option("--alpha-min", cfg.alpha_min)->check(finite);
  res_cmd->add_option("--alpha-max", cfg.alpha_max)->check(finite);
  res_cmd->add_option("--scan-step", cfg.scan_step)->check(finite);
  integrator(res_cmd);

  auto* theta_cmd = app.add_subcommand("theta", "Coupling value theta = u(1) at a resonance");
  theta_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  theta_cmd->add_option("--tol", cfg.tol, "Residual tolerance on |u'(1)| / max(1, |u(1)|)")
      ->check(finite);
  integrator(theta_cmd);

  auto* slimit_cmd = app.add_subcommand("scatter-limit", "Zero-range limit of R and T");
  slimit_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  slimit_cmd->add_option("--tol", cfg.tol, "Distance in alpha to the nearest resonance")
      ->check(finite);
  integrator(slimit_cmd);

  auto* seps_cmd = app.add_subcommand("scatter-eps", "Exact R and T at finite eps");
  seps_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  seps_cmd->add_option("--k", cfg.k)->required()->check(finite);
  seps_cmd->add_option("--eps", cfg.eps)->required()->check(finite);
  integrator(seps_cmd);

  auto* sasym_cmd = app.add_subcommand("scatter-asymptotic", "Small eps*k expansion of R and T");
  sasym_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  sasym_cmd->add_option("--k", cfg.k)->required()->check(finite);
  sasym_cmd->add_option("--eps", cfg.eps)->required()->check(finite);
  sasym_cmd->add_option("--tol", cfg.tol, "Residual tolerance treating alpha as resonant")
      ->check(finite);
  integrator(sasym_cmd);

  auto* conv_cmd = app.add_subcommand("converge", "Resolvent convergence study as eps -> 0");
  conv_cmd->add_option("--alpha", cfg.alpha)->required()->check(finite);
  conv_cmd->add_option("--eps-list", cfg.eps_list, "Decreasing eps values")
      ->delimiter(',')
      ->check(finite);
  conv_cmd->add_option("--L", cfg.L, "Half-width of the domain")->check(finite);
  conv_cmd->add_option("--N", cfg.N, "Interior nodes (even); default from --nodes-per-eps");
  conv_cmd->add_option("--nodes-per-eps", cfg.nodes_per_eps, "Mesh nodes per smallest eps")
      ->check(finite);
  conv_cmd->add_option("--k2-re", cfg.k2_re)->check(finite);
  conv_cmd->add_option("--k2-im", cfg.k2_im)->check(finite);
  conv_cmd->add_option("--tol", cfg.tol, "Distance in alpha to the nearest resonance")
      ->check(finite);
  conv_cmd->add_flag("--grid-check", cfg.grid_check, "Repeat on a grid with 2N nodes");

  auto* table6_cmd = app.add_subcommand("table6", "Resonances of seba-quadratic on [0, 200]");
  auto* export_cmd =
      app.add_subcommand("export-profile", "Write the (possibly mirrored) profile as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    const Format format = parse_format(cfg.format);
    std::string text;
    if (export_cmd->parsed()) {
      text = cmd_export(cfg);
    } else {
      Report r;
      if (moments_cmd->parsed()) r = cmd_moments(cfg);
      else if (shoot_cmd->parsed()) r = cmd_shoot(cfg);
      else if (res_cmd->parsed()) r = cmd_resonances(cfg, err);
      else if (theta_cmd->parsed()) r = cmd_theta(cfg);
      else if (slimit_cmd->parsed()) r = cmd_scatter_limit(cfg);
      else if (seps_cmd->parsed()) r = cmd_scatter_eps(cfg);
      else if (sasym_cmd->parsed()) r = cmd_scatter_asymptotic(cfg);
      else if (conv_cmd->parsed()) r = cmd_converge(cfg, err);
      else if (table6_cmd->parsed()) r = cmd_table6(cfg, err);
      text = render(r, format);
    }
    out << text << std::flush;
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace deltaprime
