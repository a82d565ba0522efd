#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrepp/harness/config.hpp"
#include "mrepp/metrics.hpp"
#include "mrepp/simgen.hpp"

namespace mrepp::harness {

struct MethodResult {
  std::string method;
  std::string scenario;
  std::size_t n = 0;
  std::string contamination;
  std::uint64_t seed = 0;
  ScoreReport scores;
  double runtime_s = 0.0;
  std::string status = "ok";
  double latent_mse = 0.0;       ///< mean squared error against the noise-free test field
  std::vector<double> weights;   ///< MREPP resolution weights, empty otherwise
  nlohmann::ordered_json resolved;
};

/// Fits one method on the training part of `data` and scores it on the test
/// part. Failures are caught and reported through `status`.
MethodResult evaluate_method(const MethodSpec& spec, const Dataset& data,
                             const ScenarioConfig& scenario, const SPSolverConfig& sp,
                             std::uint64_t seed);

/// Training indices held out for resolution-weight calibration:
/// round(fraction n) of them, drawn uniformly from the replicate seed.
std::vector<bool> calibration_mask(std::size_t n, double fraction, std::uint64_t seed);

/// Sizes each method would use at sample size n (K, m per level).
nlohmann::ordered_json resolve_method(const MethodSpec& spec, std::size_t n, double nu);

struct RunOutput {
  std::vector<MethodResult> rows;  ///< ordered by (replicate, method position)
  nlohmann::ordered_json manifest;
};

/// Replicate r uses seed = scenario.seed + r; every method in a replicate sees
/// the same Dataset. Jobs run on up to cfg.parallel_jobs threads; output order
/// does not depend on scheduling.
RunOutput run_experiment(const ExperimentConfig& cfg);

std::string results_header();
/// One CSV row; `with_runtime = false` blanks the runtime column.
std::string format_result_row(const MethodResult& row, bool with_runtime = true);
void write_results_csv(std::ostream& os, const std::vector<MethodResult>& rows,
                       bool with_runtime = true);
/// Resolution weights of MREPP rows: method,scenario,n,contamination,seed,p_1..p_L.
void write_weights_csv(std::ostream& os, const std::vector<MethodResult>& rows);

/// Writes <out>, <out>.weights.csv (when MREPP rows exist) and
/// <out>.manifest.json. Throws Error if a file cannot be opened.
void write_run_outputs(const std::string& out_path, const RunOutput& run);

}  // namespace mrepp::harness
