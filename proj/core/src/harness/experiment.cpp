#include "mrepp/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "mrepp/ensemble.hpp"
#include "mrepp/errors.hpp"
#include "mrepp/gp_exact.hpp"
#include "mrepp/pp.hpp"
#include "mrepp/rng.hpp"
#include "mrepp/support_points.hpp"
#include "parallel.hpp"

#ifndef MREPP_VERSION
#define MREPP_VERSION "unknown"
#endif

namespace mrepp::harness {
namespace {

using Clock = std::chrono::steady_clock;

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return "error: " + s;
}

SPSolverConfig seeded(const SPSolverConfig& base, std::uint64_t seed, std::uint64_t purpose) {
  SPSolverConfig cfg = base;
  cfg.seed = derive_seed(seed, Stream::kSupportPoints, purpose);
  return cfg;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_runtime(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", seconds);
  return buf;
}

}  // namespace

std::vector<bool> calibration_mask(std::size_t n, double fraction, std::uint64_t seed) {
  if (n < 2) throw InputError("calibration split needs at least 2 observations");
  auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, n - 1);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng = make_rng(seed, Stream::kCalibration);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < count; ++i) mask[idx[i]] = true;
  return mask;
}

nlohmann::ordered_json resolve_method(const MethodSpec& spec, std::size_t n, double nu) {
  const double gamma = smoothness_gamma(nu);
  nlohmann::ordered_json j;
  j["method"] = method_label(spec);
  j["n"] = n;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PPMethod>) {
          j["m"] = m.m ? *m.m : inducing_count(n, 1, gamma);
        } else if constexpr (std::is_same_v<T, EPPMethod>) {
          const std::size_t K = resolution_count(n, m.alpha);
          j["K"] = K;
          j["m"] = inducing_count(n, K, gamma);
        } else if constexpr (std::is_same_v<T, MREPPMethod>) {
          nlohmann::ordered_json ks = nlohmann::ordered_json::array();
          nlohmann::ordered_json ms = nlohmann::ordered_json::array();
          for (const auto& level : resolve_levels(m, n, gamma)) {
            ks.push_back(level.K);
            ms.push_back(level.m);
          }
          j["K"] = ks;
          j["m"] = ms;
          j["m_max"] = m.m_max;
          j["calibration_size"] = std::llround(m.calib_fraction * static_cast<double>(n));
        }
      },
      spec);
  return j;
}

MethodResult evaluate_method(const MethodSpec& spec, const Dataset& data,
                             const ScenarioConfig& scenario, const SPSolverConfig& sp,
                             std::uint64_t seed) {
  MethodResult r;
  r.method = method_label(spec);
  r.scenario = to_string(scenario.scenario);
  r.n = data.train_locations.size();
  r.contamination =
      scenario.contamination_value ? format_number(*scenario.contamination_value) : "none";
  r.seed = seed;

  const KernelParams& params = scenario.params;
  const double gamma = smoothness_gamma(params.nu);
  const auto start = Clock::now();
  try {
    r.resolved = resolve_method(spec, r.n, params.nu);
    PredictiveMixture prediction = std::visit(
        [&](const auto& m) -> PredictiveMixture {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, GPMethod>) {
            return GPFit::fit(data.train_locations, data.train_values, params)
                .predict(data.test_locations);
          } else if constexpr (std::is_same_v<T, PPMethod>) {
            const std::size_t count = m.m ? *m.m : inducing_count(r.n, 1, gamma);
            auto inducing =
                support_points(data.train_locations, count, seeded(sp, seed, 1)).points;
            return PPModel::fit(data.train_locations, data.train_values, std::move(inducing), params)
                .predict(data.test_locations);
          } else if constexpr (std::is_same_v<T, EPPMethod>) {
            const std::size_t K = resolution_count(r.n, m.alpha);
            return EPPModel::fit(data.train_locations, data.train_values, K,
                                 inducing_count(r.n, K, gamma), overlap_for(m.delta), params,
                                 seeded(sp, seed, 2))
                .predict(data.test_locations);
          } else {
            const auto mask = calibration_mask(r.n, m.calib_fraction, seed);
            LocationList fit_locs, calib_locs;
            std::vector<double> fit_vals, calib_vals;
            for (std::size_t i = 0; i < r.n; ++i) {
              const double y = data.train_values(static_cast<Eigen::Index>(i));
              if (mask[i]) {
                calib_locs.push_back(data.train_locations[i]);
                calib_vals.push_back(y);
              } else {
                fit_locs.push_back(data.train_locations[i]);
                fit_vals.push_back(y);
              }
            }
            std::vector<LevelConfig> levels;
            for (const auto& level : resolve_levels(m, r.n, gamma)) {
              levels.push_back({level.K, level.m, overlap_for(m.delta)});
            }
            const Eigen::VectorXd y_fit =
                Eigen::Map<const Eigen::VectorXd>(fit_vals.data(), static_cast<Eigen::Index>(fit_vals.size()));
            const Eigen::VectorXd y_calib = Eigen::Map<const Eigen::VectorXd>(
                calib_vals.data(), static_cast<Eigen::Index>(calib_vals.size()));
            MREPPModel model = MREPPModel::fit(fit_locs, y_fit, levels, params, seeded(sp, seed, 3));
            model.set_weights(learn_resolution_weights(model, calib_locs, y_calib).weights);
            r.weights = model.weights();
            return model.predict(data.test_locations);
          }
        },
        spec);
    r.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
    r.scores = score(prediction, data.test_values);
    r.latent_mse = (prediction.means() - data.test_latent).squaredNorm() /
                   static_cast<double>(data.test_latent.size());
  } catch (const std::exception& e) {
    r.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
    r.status = sanitize(e.what());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.scores = {nan, nan, nan, nan, nan, 0};
    r.latent_mse = nan;
  }
  return r;
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto wall_start = Clock::now();
  const std::size_t R = cfg.replicates;
  const std::size_t M = cfg.methods.size();

  std::vector<ScenarioConfig> scenarios(R, cfg.scenario);
  for (std::size_t r = 0; r < R; ++r) scenarios[r].seed = cfg.scenario.seed + r;

  std::vector<Dataset> datasets(R);
  detail::parallel_for(R, cfg.parallel_jobs,
                       [&](std::size_t r) { datasets[r] = generate(scenarios[r]); });

  RunOutput out;
  out.rows.resize(R * M);
  detail::parallel_for(R * M, cfg.parallel_jobs, [&](std::size_t job) {
    const std::size_t r = job / M;
    out.rows[job] = evaluate_method(cfg.methods[job % M], datasets[r], scenarios[r],
                                    cfg.support_points, scenarios[r].seed);
  });

  auto& manifest = out.manifest;
  manifest["tool"] = "mrepp";
  manifest["version"] = MREPP_VERSION;
  manifest["config"] = to_json(cfg);
  manifest["methods"] = nlohmann::ordered_json::array();
  for (const auto& spec : cfg.methods) {
    manifest["methods"].push_back(resolve_method(spec, cfg.scenario.n, cfg.scenario.params.nu));
  }
  manifest["replicates"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < R; ++r) {
    manifest["replicates"].push_back({{"replicate", r},
                                      {"seed", scenarios[r].seed},
                                      {"dataset_hash", hex(dataset_hash(datasets[r]))},
                                      {"contaminated", datasets[r].contaminated_indices.size()}});
  }
  manifest["wall_times"] = nlohmann::ordered_json::array();
  for (const auto& row : out.rows) {
    manifest["wall_times"].push_back(
        {{"method", row.method}, {"seed", row.seed}, {"runtime_s", row.runtime_s}});
  }
  manifest["total_wall_time_s"] = std::chrono::duration<double>(Clock::now() - wall_start).count();
  return out;
}

std::string results_header() {
  return "method,scenario,n,contamination,seed,rmse,lps,coverage90,mean_width,interval_score,"
         "runtime_s,status,latent_mse";
}

std::string format_result_row(const MethodResult& row, bool with_runtime) {
  std::ostringstream os;
  os << row.method << ',' << row.scenario << ',' << row.n << ',' << row.contamination << ','
     << row.seed << ',' << format_number(row.scores.rmse) << ',' << format_number(row.scores.lps)
     << ',' << format_number(row.scores.coverage90) << ',' << format_number(row.scores.mean_width)
     << ',' << format_number(row.scores.interval_score) << ','
     << (with_runtime ? format_runtime(row.runtime_s) : std::string()) << ',' << row.status << ','
     << format_number(row.latent_mse);
  return os.str();
}

void write_results_csv(std::ostream& os, const std::vector<MethodResult>& rows, bool with_runtime) {
  os << results_header() << '\n';
  for (const auto& row : rows) os << format_result_row(row, with_runtime) << '\n';
}

void write_weights_csv(std::ostream& os, const std::vector<MethodResult>& rows) {
  std::size_t depth = 0;
  for (const auto& row : rows) depth = std::max(depth, row.weights.size());
  os << "method,scenario,n,contamination,seed";
  for (std::size_t l = 1; l <= depth; ++l) os << ",p_" << l;
  os << '\n';
  for (const auto& row : rows) {
    if (row.weights.empty()) continue;
    os << row.method << ',' << row.scenario << ',' << row.n << ',' << row.contamination << ','
       << row.seed;
    for (std::size_t l = 0; l < depth; ++l) {
      os << ',' << (l < row.weights.size() ? format_number(row.weights[l]) : std::string());
    }
    os << '\n';
  }
}

void write_run_outputs(const std::string& out_path, const RunOutput& run) {
  std::ofstream results(out_path);
  if (!results) throw Error("cannot write results to '" + out_path + "'");
  write_results_csv(results, run.rows);

  const bool any_weights = std::any_of(run.rows.begin(), run.rows.end(),
                                       [](const MethodResult& r) { return !r.weights.empty(); });
  if (any_weights) {
    std::ofstream weights(out_path + ".weights.csv");
    if (!weights) throw Error("cannot write '" + out_path + ".weights.csv'");
    write_weights_csv(weights, run.rows);
  }
  std::ofstream manifest(out_path + ".manifest.json");
  if (!manifest) throw Error("cannot write '" + out_path + ".manifest.json'");
  manifest << run.manifest.dump(2) << '\n';
}

}  // namespace mrepp::harness
