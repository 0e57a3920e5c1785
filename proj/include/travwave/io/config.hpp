#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "travwave/basis/radial.hpp"
#include "travwave/basis/sphere.hpp"
#include "travwave/basis/torus.hpp"
#include "travwave/common.hpp"
#include "travwave/min/problem.hpp"
#include "travwave/ops/killing.hpp"

namespace travwave::io {

using json = nlohmann::ordered_json;

/// Reads one JSON object, remembering which keys were consumed.
/// finish() turns any leftover key into a ConfigurationError.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigurationError(path_ + ": expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigurationError(path_ + "." + key + ": missing");
    return convert<T>(key);
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    return convert<T>(key);
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, path_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigurationError(path_ + "." + k + ": unknown key");
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigurationError("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigurationError("expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigurationError("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigurationError("expected a string");
      }
      return v.get<T>();
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(path_ + "." + key + ": " + e.what());
    } catch (const json::exception& e) {
      throw ConfigurationError(path_ + "." + key + ": " + e.what());
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------

struct ManifoldConfig {
  std::string type = "torus";  // torus, sphere, radial
  int n = 1;
  // torus
  double period = 1.0;
  int grid_points = 64;
  // sphere
  int max_degree = 8;
  int p_max = 3;
  int quad_theta = 0;  // 0 picks the dealiasing minimum
  int quad_phi = 0;
  double metric_scale = 1.0;
  // radial
  double r_max = 20.0;
  int intervals = 400;
  std::string weight = "one";  // one, exp, quadratic, power
  double weight_power = 2.0;
  double cross_section_volume = 1.0;
  double A_lower_bound = 0.0;

  [[nodiscard]] TorusSpec torus() const { return TorusSpec{n, period, grid_points, metric_scale}; }
  [[nodiscard]] SphereSpec sphere() const {
    SphereSpec s = SphereSpec::minimal(n, max_degree, p_max, metric_scale);
    if (quad_theta > 0) s.quad_theta = quad_theta;
    if (quad_phi > 0) s.quad_phi = quad_phi;
    return s;
  }
  [[nodiscard]] std::function<double(double)> weight_fn() const {
    if (weight == "one") return [](double) { return 1.0; };
    if (weight == "exp") return [](double r) { return std::exp(r); };
    if (weight == "quadratic") return [](double r) { return (1 + r) * (1 + r); };
    if (weight == "power") {
      const double k = weight_power;
      return [k](double r) { return std::pow(1 + r, k); };
    }
    throw ConfigurationError("manifold.weight: expected one, exp, quadratic or power");
  }
  [[nodiscard]] RadialSpec radial() const {
    RadialSpec s = RadialSpec::uniform(r_max, intervals, weight_fn(), cross_section_volume, n, weight);
    s.A_lower_bound = A_lower_bound;
    return s;
  }
};

struct KillingConfig {
  std::vector<double> velocity;  // torus
  double speed = 0.0;            // sphere factor, or radial cross-section bound
  int plane_i = 0, plane_j = 1;

  [[nodiscard]] KillingSpec resolve(const ManifoldConfig& m) const {
    if (m.type == "torus") {
      std::vector<double> v = velocity;
      if (v.empty()) v.assign(static_cast<std::size_t>(m.n), 0.0);
      if (static_cast<int>(v.size()) != m.n) throw ConfigurationError("killing.velocity must have n entries");
      return KillingSpec::torus(v);
    }
    if (m.type == "sphere") return KillingSpec::sphere(speed, plane_i, plane_j);
    return KillingSpec::radial(speed);
  }
};

struct RunConfig {
  std::string subcommand;
  ManifoldConfig manifold;
  KillingConfig killing;
  ProblemSpec problem;
  json experiment = json::object();  // parsed by each subcommand
  std::string output = "out";
  std::uint64_t seed = default_seed;
  int threads = 1;
};

inline Equation parse_equation(const std::string& s) {
  if (s == "NLS") return Equation::NLS;
  if (s == "NLKG") return Equation::NLKG;
  if (s == "TwoNonlinearity") return Equation::TwoNonlinearity;
  throw ConfigurationError("problem.equation: expected NLS, NLKG or TwoNonlinearity");
}
inline Scheme parse_scheme(const std::string& s) {
  if (s == "EnergyMin") return Scheme::EnergyMin;
  if (s == "FMin") return Scheme::FMin;
  throw ConfigurationError("problem.scheme: expected EnergyMin or FMin");
}

inline void read_manifold(Section s, ManifoldConfig& m) {
  m.type = s.get<std::string>("type", m.type);
  m.n = s.get("n", m.n);
  m.metric_scale = s.get("metric_scale", m.metric_scale);
  if (m.type == "torus") {
    m.period = s.get("period", m.period);
    m.grid_points = s.get("grid_points", m.grid_points);
  } else if (m.type == "sphere") {
    if (!s.has("n")) m.n = 2;
    m.max_degree = s.get("max_degree", m.max_degree);
    m.p_max = s.get("p_max", m.p_max);
    m.quad_theta = s.get("quad_theta", m.quad_theta);
    m.quad_phi = s.get("quad_phi", m.quad_phi);
  } else if (m.type == "radial") {
    m.r_max = s.get("r_max", m.r_max);
    m.intervals = s.get("intervals", m.intervals);
    m.weight = s.get<std::string>("weight", m.weight);
    m.weight_power = s.get("weight_power", m.weight_power);
    m.cross_section_volume = s.get("cross_section_volume", m.cross_section_volume);
    m.A_lower_bound = s.get("A_lower_bound", m.A_lower_bound);
  } else {
    throw ConfigurationError("manifold.type: expected torus, sphere or radial");
  }
  s.finish();
}

inline void read_killing(Section s, KillingConfig& k) {
  k.velocity = s.get("velocity", k.velocity);
  k.speed = s.get("speed", k.speed);
  const auto plane = s.get("plane", std::vector<int>{k.plane_i, k.plane_j});
  if (plane.size() != 2) throw ConfigurationError("killing.plane must list two axes");
  k.plane_i = plane[0];
  k.plane_j = plane[1];
  s.finish();
}

inline void read_problem(Section s, ProblemSpec& p) {
  p.equation = parse_equation(s.get<std::string>("equation", to_string(p.equation)));
  p.scheme = parse_scheme(s.get<std::string>("scheme", to_string(p.scheme)));
  p.constraint = p.scheme == Scheme::EnergyMin && p.equation != Equation::TwoNonlinearity ? ConstraintKind::Mass
                                                                                           : ConstraintKind::LpPlusOne;
  p.lambda = s.get("lambda", p.lambda);
  p.m_mass = s.get("m", p.m_mass);
  p.p = s.get("p", p.p);
  p.q = s.get("q", p.q);
  p.K = s.get("K", p.K);
  p.constraint_value = s.get("constraint_value", p.constraint_value);
  p.subspace_mu = s.optional<double>("subspace_mu");
  p.tol_objective = s.get("tol_objective", p.tol_objective);
  p.tol_gradient = s.get("tol_gradient", p.tol_gradient);
  p.max_iterations = s.get("max_iterations", p.max_iterations);
  p.random_starts = s.get("random_starts", p.random_starts);
  p.random_cutoff = s.get("random_cutoff", p.random_cutoff);
  p.include_constant = s.get("include_constant", p.include_constant);
  p.real_only = s.get("real_only", p.real_only);
  s.finish();
}

/// Parses a config document, or the config echoed inside a run manifest.
inline RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigurationError("config: expected an object at the top level");
  if (doc.contains("manifest_version")) {
    if (!doc.contains("config")) throw ConfigurationError("manifest without an embedded config");
    return parse_config(doc.at("config"));
  }
  RunConfig c;
  Section top(doc, "config");
  c.subcommand = top.get<std::string>("subcommand", "");
  read_manifold(top.sub("manifold"), c.manifold);
  read_killing(top.sub("killing"), c.killing);
  read_problem(top.sub("problem"), c.problem);
  c.experiment = top.get("experiment", json::object());
  if (!c.experiment.is_object()) throw ConfigurationError("config.experiment: expected an object");
  c.output = top.get<std::string>("output", c.output);
  c.seed = top.get<std::uint64_t>("seed", c.seed);
  c.threads = top.get("threads", c.threads);
  top.finish();
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Echo of the fully resolved config

inline json to_json(const ManifoldConfig& m) {
  json j;
  j["type"] = m.type;
  j["n"] = m.n;
  j["metric_scale"] = m.metric_scale;
  if (m.type == "torus") {
    j["period"] = m.period;
    j["grid_points"] = m.grid_points;
  } else if (m.type == "sphere") {
    const SphereSpec s = m.sphere();
    j["max_degree"] = m.max_degree;
    j["p_max"] = m.p_max;
    j["quad_theta"] = s.quad_theta;
    j["quad_phi"] = s.quad_phi;
  } else {
    j["r_max"] = m.r_max;
    j["intervals"] = m.intervals;
    j["weight"] = m.weight;
    j["weight_power"] = m.weight_power;
    j["cross_section_volume"] = m.cross_section_volume;
    j["A_lower_bound"] = m.A_lower_bound;
  }
  return j;
}

inline json to_json(const KillingConfig& k, const ManifoldConfig& m) {
  json j;
  if (m.type == "torus") {
    std::vector<double> v = k.velocity;
    if (v.empty()) v.assign(static_cast<std::size_t>(m.n), 0.0);
    j["velocity"] = v;
  } else {
    j["speed"] = k.speed;
    if (m.type == "sphere") j["plane"] = {k.plane_i, k.plane_j};
  }
  return j;
}

inline json to_json(const ProblemSpec& p) {
  json j;
  j["equation"] = to_string(p.equation);
  j["scheme"] = to_string(p.scheme);
  j["lambda"] = p.lambda;
  j["m"] = p.m_mass;
  j["p"] = p.p;
  j["q"] = p.q;
  j["K"] = p.K;
  j["constraint_value"] = p.constraint_value;
  j["subspace_mu"] = p.subspace_mu ? json(*p.subspace_mu) : json(nullptr);
  j["tol_objective"] = p.tol_objective;
  j["tol_gradient"] = p.tol_gradient;
  j["max_iterations"] = p.max_iterations;
  j["random_starts"] = p.random_starts;
  j["random_cutoff"] = p.random_cutoff;
  j["include_constant"] = p.include_constant;
  j["real_only"] = p.real_only;
  return j;
}

/// Resolved config; `experiment` is the block as completed by the subcommand.
inline json to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["manifold"] = to_json(c.manifold);
  j["killing"] = to_json(c.killing, c.manifold);
  j["problem"] = to_json(c.problem);
  j["experiment"] = c.experiment;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

}  // namespace travwave::io
