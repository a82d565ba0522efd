#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "mrepp/mixture.hpp"

namespace mrepp {

/// Upper 5% standard-normal quantile, fixed to 7 significant digits.
inline constexpr double kZ95 = 1.6448536;

struct ScoreReport {
  double rmse = 0.0;
  double lps = 0.0;
  double coverage90 = 0.0;
  double mean_width = 0.0;
  double interval_score = 0.0;
  std::size_t n_scored = 0;
};

/// Throws InputError on length mismatch or empty input.
double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);

/// Negative mean log mixture density (lower is better). Throws ScoringError
/// if a component has non-positive variance.
double lps(const PredictiveMixture& mixture, const Eigen::VectorXd& actual);

/// Same score using the moment-matched Gaussian at each location.
double lps_gaussian(const PredictiveMixture& mixture, const Eigen::VectorXd& actual);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Central 90% interval of the moment-matched Gaussian.
Interval interval90(const PredictiveDistribution& d);

/// Coverage (closed intervals) and mean width of the 90% intervals.
std::pair<double, double> hpd90(const PredictiveMixture& mixture, const Eigen::VectorXd& actual);

/// Mean interval score of the central (1 - alpha) intervals.
double interval_score(const PredictiveMixture& mixture, const Eigen::VectorXd& actual,
                      double alpha = 0.1);

/// Interval score of a single interval.
double interval_score_one(Interval iv, double y, double alpha);

ScoreReport score(const PredictiveMixture& mixture, const Eigen::VectorXd& actual);

}  // namespace mrepp
