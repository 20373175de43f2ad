#include "deltaprime/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deltaprime/error.hpp"

namespace deltaprime {

namespace {

using nlohmann::json;

bool finite(double x) { return std::isfinite(x); }

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void check_in_unit_interval(double x, const std::string& field) {
  if (!(x >= -1.0 && x <= 1.0))
    throw InvalidInput(field + " = " + std::to_string(x) + " lies outside [-1, 1]");
}

double number_field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInput(where + ": missing field '" + key + "'");
  if (!it->is_number()) throw InvalidInput(where + "." + key + ": expected a number");
  double x = it->get<double>();
  if (!finite(x)) throw InvalidInput(where + "." + key + ": not finite");
  return x;
}

std::vector<double> number_array(const json& value, const std::string& where) {
  if (!value.is_array()) throw InvalidInput(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& v = value[i];
    std::string field = where + "[" + std::to_string(i) + "]";
    if (!v.is_number()) throw InvalidInput(field + ": expected a number");
    double x = v.get<double>();
    if (!finite(x)) throw InvalidInput(field + ": not finite");
    out.push_back(x);
  }
  return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw InvalidInput(where + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace

bool Moments::delta_prime_like(double tol) const {
  return std::abs(m0) <= tol && std::abs(m1 + 1.0) <= tol;
}

PotentialProfile PotentialProfile::piecewise(std::vector<Segment> segments) {
  if (segments.empty()) throw InvalidInput("segments: at least one segment is required");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    std::string where = "segments[" + std::to_string(i) + "]";
    if (!finite(s.a)) throw InvalidInput(where + ".a: not finite");
    if (!finite(s.b)) throw InvalidInput(where + ".b: not finite");
    check_in_unit_interval(s.a, where + ".a");
    check_in_unit_interval(s.b, where + ".b");
    if (!(s.a < s.b)) throw InvalidInput(where + ": requires a < b");
    if (s.coeffs.empty()) throw InvalidInput(where + ".coeffs: must not be empty");
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
      if (!finite(s.coeffs[j]))
        throw InvalidInput(where + ".coeffs[" + std::to_string(j) + "]: not finite");
    }
    if (i > 0 && segments[i - 1].b != s.a) {
      throw InvalidInput(where + ".a: segments must be sorted and contiguous (previous b = " +
                         std::to_string(segments[i - 1].b) + ")");
    }
  }
  PotentialProfile p;
  p.kind_ = Kind::PiecewisePolynomial;
  p.segments_ = std::move(segments);
  return p;
}

PotentialProfile PotentialProfile::sampled(std::vector<double> xi, std::vector<double> psi) {
  if (xi.size() != psi.size())
    throw InvalidInput("samples: xi and psi must have the same length");
  if (xi.size() < 2) throw InvalidInput("samples.xi: at least two nodes are required");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    std::string idx = "[" + std::to_string(i) + "]";
    if (!finite(xi[i])) throw InvalidInput("samples.xi" + idx + ": not finite");
    if (!finite(psi[i])) throw InvalidInput("samples.psi" + idx + ": not finite");
    check_in_unit_interval(xi[i], "samples.xi" + idx);
    if (i > 0 && !(xi[i - 1] < xi[i]))
      throw InvalidInput("samples.xi" + idx + ": nodes must be strictly increasing");
  }
  PotentialProfile p;
  p.kind_ = Kind::Sampled;
  p.nodes_ = std::move(xi);
  p.values_ = std::move(psi);
  return p;
}

double PotentialProfile::support_min() const {
  return kind_ == Kind::Sampled ? nodes_.front() : segments_.front().a;
}

double PotentialProfile::support_max() const {
  return kind_ == Kind::Sampled ? nodes_.back() : segments_.back().b;
}

std::vector<double> PotentialProfile::breakpoints() const {
  if (kind_ == Kind::Sampled) return nodes_;
  std::vector<double> pts;
  pts.reserve(segments_.size() + 1);
  for (const auto& s : segments_) pts.push_back(s.a);
  pts.push_back(segments_.back().b);
  return pts;
}

double PotentialProfile::operator()(double xi) const {
  if (kind_ == Kind::Sampled) {
    if (xi < nodes_.front() || xi > nodes_.back()) return 0.0;
    auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), xi);
    if (hi == nodes_.end()) return values_.back();
    auto i = static_cast<std::size_t>(hi - nodes_.begin());
    double x0 = nodes_[i - 1], x1 = nodes_[i];
    double t = (xi - x0) / (x1 - x0);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
  }
  for (const auto& s : segments_) {
    if (xi >= s.a && xi <= s.b) return horner(s.coeffs, xi);
  }
  return 0.0;
}

PotentialProfile PotentialProfile::mirrored() const {
  // 0.0 - x rather than -x keeps zero positive in exported files.
  auto neg = [](double x) { return 0.0 - x; };
  PotentialProfile p;
  p.kind_ = kind_;
  if (kind_ == Kind::Sampled) {
    p.nodes_.assign(nodes_.rbegin(), nodes_.rend());
    for (double& x : p.nodes_) x = neg(x);
    p.values_.assign(values_.rbegin(), values_.rend());
    return p;
  }
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    Segment s{neg(it->b), neg(it->a), it->coeffs};
    for (std::size_t j = 1; j < s.coeffs.size(); j += 2) s.coeffs[j] = neg(s.coeffs[j]);
    p.segments_.push_back(std::move(s));
  }
  return p;
}

bool PotentialProfile::identically_zero() const {
  auto zero = [](double x) { return x == 0.0; };
  if (kind_ == Kind::Sampled) return std::all_of(values_.begin(), values_.end(), zero);
  return std::all_of(segments_.begin(), segments_.end(), [&](const Segment& s) {
    return std::all_of(s.coeffs.begin(), s.coeffs.end(), zero);
  });
}

double eval(const PotentialProfile& profile, double xi) { return profile(xi); }

Moments moments(const PotentialProfile& profile) {
  Moments m;
  if (profile.kind() == PotentialProfile::Kind::Sampled) {
    const auto& x = profile.nodes();
    const auto& y = profile.values();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double h = x[i + 1] - x[i];
      m.m0 += 0.5 * h * (y[i] + y[i + 1]);
      m.m1 += h / 6.0 * ((2.0 * x[i] + x[i + 1]) * y[i] + (x[i] + 2.0 * x[i + 1]) * y[i + 1]);
    }
    return m;
  }
  for (const auto& s : profile.segments()) {
    // integral of xi^n over [a, b] = (b^(n+1) - a^(n+1)) / (n+1)
    double pa = s.a, pb = s.b;  // a^(j+1), b^(j+1)
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
      double c = s.coeffs[j];
      double pa2 = pa * s.a, pb2 = pb * s.b;
      m.m0 += c * (pb - pa) / static_cast<double>(j + 1);
      m.m1 += c * (pb2 - pa2) / static_cast<double>(j + 2);
      pa = pa2;
      pb = pb2;
    }
  }
  return m;
}

PotentialProfile builtin(std::string_view name) {
  if (name == "seba-quadratic") {
    return PotentialProfile::piecewise({{-1.0, 0.0, {0.0, -6.0, -6.0}},
                                        {0.0, 1.0, {0.0, -6.0, 6.0}}});
  }
  if (name == "step") {
    return PotentialProfile::piecewise({{-1.0, 0.0, {1.0}}, {0.0, 1.0, {-1.0}}});
  }
  if (name == "zero") return PotentialProfile::piecewise({{-1.0, 1.0, {0.0}}});
  throw InvalidInput("unknown builtin profile '" + std::string(name) +
                     "' (expected seba-quadratic, step or zero)");
}

std::vector<std::string> builtin_names() { return {"seba-quadratic", "step", "zero"}; }

PotentialProfile parse_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    // parse errors, but also numbers too large for a double
    throw InvalidInput(std::string("profile: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("profile: top level must be a JSON object");
  reject_unknown_keys(doc, {"segments", "samples"}, "profile");
  bool has_segments = doc.contains("segments");
  bool has_samples = doc.contains("samples");
  if (has_segments == has_samples)
    throw InvalidInput("profile: exactly one of 'segments' or 'samples' is required");

  if (has_segments) {
    const json& arr = doc["segments"];
    if (!arr.is_array()) throw InvalidInput("segments: expected an array");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string where = "segments[" + std::to_string(i) + "]";
      const json& s = arr[i];
      if (!s.is_object()) throw InvalidInput(where + ": expected an object");
      reject_unknown_keys(s, {"a", "b", "coeffs"}, where);
      Segment seg;
      seg.a = number_field(s, "a", where);
      seg.b = number_field(s, "b", where);
      if (!s.contains("coeffs")) throw InvalidInput(where + ": missing field 'coeffs'");
      seg.coeffs = number_array(s["coeffs"], where + ".coeffs");
      segs.push_back(std::move(seg));
    }
    return PotentialProfile::piecewise(std::move(segs));
  }

  const json& smp = doc["samples"];
  if (!smp.is_object()) throw InvalidInput("samples: expected an object");
  reject_unknown_keys(smp, {"xi", "psi"}, "samples");
  if (!smp.contains("xi")) throw InvalidInput("samples: missing field 'xi'");
  if (!smp.contains("psi")) throw InvalidInput("samples: missing field 'psi'");
  return PotentialProfile::sampled(number_array(smp["xi"], "samples.xi"),
                                   number_array(smp["psi"], "samples.psi"));
}

PotentialProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("profile: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str());
}

std::string profile_to_json(const PotentialProfile& profile) {
  nlohmann::ordered_json doc;
  if (profile.kind() == PotentialProfile::Kind::Sampled) {
    doc["samples"]["xi"] = profile.nodes();
    doc["samples"]["psi"] = profile.values();
  } else {
    auto segs = nlohmann::ordered_json::array();
    for (const auto& s : profile.segments()) {
      nlohmann::ordered_json js;
      js["a"] = s.a;
      js["b"] = s.b;
      js["coeffs"] = s.coeffs;
      segs.push_back(std::move(js));
    }
    doc["segments"] = std::move(segs);
  }
  return doc.dump(2) + "\n";
}

}  // namespace deltaprime
