#include "mrepp/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mrepp/errors.hpp"

namespace mrepp::harness {
namespace {

using json = nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string() && (v == "none" || v == "auto")) return std::nullopt;
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

std::string format_alpha(double a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

KernelParams parse_params(const json& j) {
  KernelParams p;
  p.eta2 = get_or(j, "eta2", p.eta2);
  p.phi = get_or(j, "phi", p.phi);
  p.nu = get_or(j, "nu", p.nu);
  p.tau2 = get_or(j, "tau2", p.tau2);
  return p;
}

ScenarioConfig parse_scenario_config(const json& j) {
  if (!j.is_object()) throw ConfigError("'scenario' must be an object");
  ScenarioConfig s;
  s.scenario = parse_scenario(get_or<std::string>(j, "scenario", "FixedSpace"));
  s.n = get_or<std::size_t>(j, "n", s.n);
  s.n_test = get_or<std::size_t>(j, "n_test", s.n_test);
  if (j.contains("params")) s.params = parse_params(j.at("params"));
  s.contamination_value = optional_number(j, "contamination_value");
  s.contamination_fraction = get_or(j, "contamination_fraction", s.contamination_fraction);
  s.r_S_target = get_or(j, "r_S_target", s.r_S_target);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  return s;
}

MethodSpec parse_method(const json& j) {
  if (j.is_string()) return parse_method(json{{"type", j}});
  if (!j.is_object() || !j.contains("type")) throw ConfigError("method specs need a 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "GP") return GPMethod{};
  if (type == "PP") {
    PPMethod m;
    if (j.contains("m") && !j.at("m").is_null()) m.m = j.at("m").get<std::size_t>();
    return m;
  }
  if (type == "EPP") {
    EPPMethod m;
    m.alpha = get_or(j, "alpha", m.alpha);
    m.delta = optional_number(j, "delta");
    return m;
  }
  if (type == "MREPP") {
    MREPPMethod m;
    m.alphas = get_or(j, "alpha", m.alphas);
    m.m_max = get_or(j, "m_max", m.m_max);
    m.delta = optional_number(j, "delta");
    m.calib_fraction = get_or(j, "calib_fraction", m.calib_fraction);
    return m;
  }
  throw ConfigError("unknown method type '" + type + "'");
}

nlohmann::ordered_json method_json(const MethodSpec& spec) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GPMethod>) {
          j["type"] = "GP";
        } else if constexpr (std::is_same_v<T, PPMethod>) {
          j["type"] = "PP";
          j["m"] = m.m ? nlohmann::ordered_json(*m.m) : nlohmann::ordered_json(nullptr);
        } else if constexpr (std::is_same_v<T, EPPMethod>) {
          j["type"] = "EPP";
          j["alpha"] = m.alpha;
          j["delta"] = m.delta ? nlohmann::ordered_json(*m.delta) : nlohmann::ordered_json(nullptr);
        } else {
          j["type"] = "MREPP";
          j["alpha"] = m.alphas;
          j["m_max"] = m.m_max;
          j["delta"] = m.delta ? nlohmann::ordered_json(*m.delta) : nlohmann::ordered_json(nullptr);
          j["calib_fraction"] = m.calib_fraction;
        }
      },
      spec);
  return j;
}

}  // namespace

std::string method_label(const MethodSpec& spec) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GPMethod>) {
          return "GP";
        } else if constexpr (std::is_same_v<T, PPMethod>) {
          return m.m ? "PP_m" + std::to_string(*m.m) : "PP";
        } else if constexpr (std::is_same_v<T, EPPMethod>) {
          return "EPP_a" + format_alpha(m.alpha);
        } else {
          return "MREPP_L" + std::to_string(m.alphas.size());
        }
      },
      spec);
}

double smoothness_gamma(double nu) { return nu + 1.0; }

std::size_t resolution_count(std::size_t n, double alpha) {
  const double k = std::pow(static_cast<double>(n), alpha);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(k * (1.0 + 1e-12))));
}

std::size_t inducing_count(std::size_t n, std::size_t K, double gamma, std::optional<double> m_max) {
  const double per_region = static_cast<double>(n) / static_cast<double>(K);
  double m = std::min(std::pow(per_region, 2.0 / gamma), 0.5 * per_region);
  if (m_max) m = std::min(m, *m_max);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(m * (1.0 + 1e-12))));
}

std::vector<ResolvedLevel> resolve_levels(const MREPPMethod& spec, std::size_t n, double gamma) {
  if (spec.alphas.empty()) throw ConfigError("MREPP needs at least one alpha");
  std::vector<ResolvedLevel> out;
  for (double a : spec.alphas) {
    const std::size_t K = resolution_count(n, a);
    out.push_back({a, K, inducing_count(n, K, gamma, spec.m_max)});
  }
  for (std::size_t l = 1; l < out.size(); ++l) {
    if (out[l].K <= out[l - 1].K) {
      throw ConfigError("MREPP levels must have strictly increasing K (alpha " +
                        format_alpha(out[l].alpha) + " gives K = " + std::to_string(out[l].K) +
                        " at n = " + std::to_string(n) + ")");
    }
  }
  return out;
}

Overlap overlap_for(const std::optional<double>& delta) {
  return delta ? Overlap::absolute(*delta) : Overlap::relative_to_sites(0.1);
}

void ExperimentConfig::validate() const {
  scenario.validate();
  support_points.validate();
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (parallel_jobs < 1) throw ConfigError("parallel_jobs must be >= 1");
  const double gamma = smoothness_gamma(scenario.params.nu);
  std::vector<std::size_t> sizes = n_grid;
  sizes.push_back(scenario.n);
  for (const auto& spec : methods) {
    if (const auto* e = std::get_if<EPPMethod>(&spec)) {
      if (!(e->alpha >= 0.0 && e->alpha < 1.0)) throw ConfigError("EPP alpha must lie in [0, 1)");
      if (e->delta && *e->delta < 0.0) throw ConfigError("EPP delta must be >= 0");
    }
    if (const auto* mr = std::get_if<MREPPMethod>(&spec)) {
      if (!(mr->calib_fraction > 0.0 && mr->calib_fraction < 1.0)) {
        throw ConfigError("MREPP calib_fraction must lie in (0, 1)");
      }
      if (!(mr->m_max >= 1.0)) throw ConfigError("MREPP m_max must be >= 1");
      if (mr->delta && *mr->delta < 0.0) throw ConfigError("MREPP delta must be >= 0");
      for (std::size_t n : sizes) resolve_levels(*mr, n, gamma);
    }
    if (const auto* pp = std::get_if<PPMethod>(&spec)) {
      if (pp->m && *pp->m == 0) throw ConfigError("PP m must be >= 1");
    }
  }
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("scenario")) cfg.scenario = parse_scenario_config(j.at("scenario"));
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m));
    }
    cfg.replicates = get_or<std::size_t>(j, "replicates", cfg.replicates);
    cfg.output_path = get_or<std::string>(j, "output_path", cfg.output_path);
    cfg.parallel_jobs = get_or<std::size_t>(j, "parallel_jobs", cfg.parallel_jobs);
    cfg.n_grid = get_or(j, "n_grid", cfg.n_grid);
    if (j.contains("influence")) {
      const json& a = j.at("influence");
      cfg.influence.n_grid = get_or(a, "n_grid", cfg.influence.n_grid);
      cfg.influence.m_grid = get_or(a, "m_grid", cfg.influence.m_grid);
      cfg.influence.replicates = get_or(a, "replicates", cfg.influence.replicates);
      cfg.influence.fd_step = get_or(a, "fd_step", cfg.influence.fd_step);
      cfg.influence.fd_checks = get_or(a, "fd_checks", cfg.influence.fd_checks);
      if (a.contains("target")) {
        const auto t = a.at("target").get<std::vector<double>>();
        if (t.size() != 2) throw ConfigError("influence.target must be [x, y]");
        cfg.influence.target = {t[0], t[1]};
      }
    }
    if (j.contains("support_points")) {
      const json& s = j.at("support_points");
      cfg.support_points.max_iters = get_or(s, "max_iters", cfg.support_points.max_iters);
      cfg.support_points.tol = get_or(s, "tol", cfg.support_points.tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  const auto& s = cfg.scenario;
  j["scenario"] = {
      {"scenario", to_string(s.scenario)},
      {"n", s.n},
      {"n_test", s.n_test},
      {"params",
       {{"eta2", s.params.eta2}, {"phi", s.params.phi}, {"nu", s.params.nu}, {"tau2", s.params.tau2}}},
      {"contamination_value",
       s.contamination_value ? nlohmann::ordered_json(*s.contamination_value)
                             : nlohmann::ordered_json("none")},
      {"contamination_fraction", s.contamination_fraction},
      {"r_S_target", s.r_S_target},
      {"seed", s.seed}};
  j["methods"] = nlohmann::ordered_json::array();
  for (const auto& m : cfg.methods) j["methods"].push_back(method_json(m));
  j["replicates"] = cfg.replicates;
  j["output_path"] = cfg.output_path;
  j["parallel_jobs"] = cfg.parallel_jobs;
  j["n_grid"] = cfg.n_grid;
  j["influence"] = {{"n_grid", cfg.influence.n_grid},
                    {"m_grid", cfg.influence.m_grid},
                    {"replicates", cfg.influence.replicates},
                    {"target", {cfg.influence.target.x, cfg.influence.target.y}},
                    {"fd_step", cfg.influence.fd_step},
                    {"fd_checks", cfg.influence.fd_checks}};
  j["support_points"] = {{"max_iters", cfg.support_points.max_iters},
                         {"tol", cfg.support_points.tol}};
  return j;
}

}  // namespace mrepp::harness
