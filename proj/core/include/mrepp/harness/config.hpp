#pragma once

// Experiment configuration and the hyperparameter rules that turn (n, alpha)
// into ensemble sizes:
//   K   = max(1, floor(n^alpha))
//   m   = floor(min(m_max, (n/K)^(2/gamma), 0.5 n/K)), at least 1
//   gamma = nu + 1
//
// Configs are JSON documents; see README.md for the layout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrepp/kernels.hpp"
#include "mrepp/partition.hpp"
#include "mrepp/simgen.hpp"
#include "mrepp/support_points.hpp"

namespace mrepp::harness {

struct GPMethod {};

struct PPMethod {
  std::optional<std::size_t> m;
};

struct EPPMethod {
  double alpha = 0.5;
  std::optional<double> delta;  ///< absolute overlap; default is 0.1 x median site distance
};

struct MREPPMethod {
  std::vector<double> alphas{0.0, 0.5};
  double m_max = 200.0;
  std::optional<double> delta;
  double calib_fraction = 0.2;
};

using MethodSpec = std::variant<GPMethod, PPMethod, EPPMethod, MREPPMethod>;

/// Short CSV-safe label: GP, PP, EPP_a0.5, MREPP_L2.
std::string method_label(const MethodSpec& spec);

struct InfluenceAuditConfig {
  std::vector<std::size_t> n_grid{200, 400, 800, 1600};
  std::vector<std::size_t> m_grid{10};
  std::size_t replicates = 20;
  Location target{0.0, 0.0};
  double fd_step = 1e-6;
  std::size_t fd_checks = 32;  ///< perturbed indices per model (argmax always included)
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<MethodSpec> methods;
  std::size_t replicates = 1;
  std::string output_path = "results.csv";
  std::size_t parallel_jobs = 1;
  std::vector<std::size_t> n_grid;
  InfluenceAuditConfig influence;
  SPSolverConfig support_points;

  void validate() const;
};

/// Throws ConfigError on missing or malformed keys.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

double smoothness_gamma(double nu);
std::size_t resolution_count(std::size_t n, double alpha);
std::size_t inducing_count(std::size_t n, std::size_t K, double gamma,
                           std::optional<double> m_max = std::nullopt);

struct ResolvedLevel {
  double alpha = 0.0;
  std::size_t K = 1;
  std::size_t m = 1;
};

/// Level sizes for an MREPP spec at sample size n. Throws ConfigError when K
/// is not strictly increasing.
std::vector<ResolvedLevel> resolve_levels(const MREPPMethod& spec, std::size_t n, double gamma);

Overlap overlap_for(const std::optional<double>& delta);

}  // namespace mrepp::harness
