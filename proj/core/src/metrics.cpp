#include "mrepp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrepp/errors.hpp"

namespace mrepp {
namespace {

void check_lengths(std::size_t predicted, Eigen::Index actual) {
  if (predicted == 0) throw InputError("metrics: nothing to score");
  if (static_cast<Eigen::Index>(predicted) != actual) {
    throw InputError("metrics: predictions and actuals differ in length");
  }
}

double log_normal_density(double y, double mean, double variance) {
  const double z = y - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + z * z / variance);
}

}  // namespace

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  check_lengths(static_cast<std::size_t>(predicted.size()), actual.size());
  return std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(actual.size()));
}

double lps(const PredictiveMixture& mixture, const Eigen::VectorXd& actual) {
  check_lengths(mixture.size(), actual.size());
  double total = 0.0;
  std::vector<double> terms;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    const auto& comps = mixture[i].components;
    if (comps.empty()) throw ScoringError("lps: location without mixture components");
    terms.clear();
    for (const auto& c : comps) {
      if (!(c.variance > 0.0)) throw ScoringError("lps: component with non-positive variance");
      terms.push_back(std::log(c.weight) +
                      log_normal_density(actual(static_cast<Eigen::Index>(i)), c.mean, c.variance));
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    total += top + std::log(acc);
  }
  return -total / static_cast<double>(mixture.size());
}

double lps_gaussian(const PredictiveMixture& mixture, const Eigen::VectorXd& actual) {
  check_lengths(mixture.size(), actual.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    const auto& d = mixture[i];
    if (!(d.variance > 0.0)) throw ScoringError("lps: non-positive predictive variance");
    total += log_normal_density(actual(static_cast<Eigen::Index>(i)), d.mean, d.variance);
  }
  return -total / static_cast<double>(mixture.size());
}

Interval interval90(const PredictiveDistribution& d) {
  const double half = kZ95 * std::sqrt(std::max(d.variance, 0.0));
  return {d.mean - half, d.mean + half};
}

std::pair<double, double> hpd90(const PredictiveMixture& mixture, const Eigen::VectorXd& actual) {
  check_lengths(mixture.size(), actual.size());
  std::size_t covered = 0;
  double width = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    const Interval iv = interval90(mixture[i]);
    const double y = actual(static_cast<Eigen::Index>(i));
    if (y >= iv.lower && y <= iv.upper) ++covered;
    width += iv.upper - iv.lower;
  }
  const double n = static_cast<double>(mixture.size());
  return {static_cast<double>(covered) / n, width / n};
}

double interval_score_one(Interval iv, double y, double alpha) {
  double s = iv.upper - iv.lower;
  if (y < iv.lower) s += (2.0 / alpha) * (iv.lower - y);
  if (y > iv.upper) s += (2.0 / alpha) * (y - iv.upper);
  return s;
}

double interval_score(const PredictiveMixture& mixture, const Eigen::VectorXd& actual, double alpha) {
  check_lengths(mixture.size(), actual.size());
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("interval_score: alpha must lie in (0, 1)");
  double total = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    total += interval_score_one(interval90(mixture[i]), actual(static_cast<Eigen::Index>(i)), alpha);
  }
  return total / static_cast<double>(mixture.size());
}

ScoreReport score(const PredictiveMixture& mixture, const Eigen::VectorXd& actual) {
  ScoreReport r;
  r.rmse = rmse(mixture.means(), actual);
  r.lps = lps(mixture, actual);
  std::tie(r.coverage90, r.mean_width) = hpd90(mixture, actual);
  r.interval_score = interval_score(mixture, actual);
  r.n_scored = mixture.size();
  return r;
}

}  // namespace mrepp
