#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mrepp/harness/config.hpp"
#include "mrepp/harness/experiment.hpp"

namespace mrepp::harness {

struct SlopeResult {
  std::string method;
  double slope = 0.0;
  double std_error = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares of log(y) on log(x). Needs >= 2 points.
SlopeResult fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log(mean squared error against the latent field) on log(n) for
/// one method. Requires >= 3 distinct n with >= 5 ok replicates each; throws
/// InputError otherwise.
SlopeResult slope_diagnostic(const std::vector<MethodResult>& rows, const std::string& method);

struct SlopeRun {
  std::vector<MethodResult> rows;
  std::vector<SlopeResult> slopes;
};

/// Runs the experiment at every n of cfg.n_grid and fits one slope per method.
SlopeRun run_slopes(const ExperimentConfig& cfg);

void write_slopes_csv(std::ostream& os, const std::vector<SlopeResult>& slopes);

}  // namespace mrepp::harness
