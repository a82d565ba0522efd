#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mrepp {

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Predictive distribution at one location: a finite Gaussian mixture and its
/// first two moments.
struct PredictiveDistribution {
  std::vector<MixtureComponent> components;
  double mean = 0.0;
  double variance = 0.0;

  static PredictiveDistribution gaussian(double mean, double variance);

  /// Builds the aggregate from weighted components. Weights are expected to
  /// sum to one; components with zero weight are dropped.
  static PredictiveDistribution from_components(std::vector<MixtureComponent> components);

  double weight_sum() const noexcept;
};

/// Mixture moments: mean = sum w mu, variance = sum w (s2 + mu^2) - mean^2,
/// evaluated in the centred form sum w s2 + sum w (mu - mean)^2.
void mixture_moments(std::span<const MixtureComponent> components, double& mean,
                     double& variance) noexcept;

/// Per-target predictive distributions for a batch of locations.
class PredictiveMixture {
 public:
  PredictiveMixture() = default;
  explicit PredictiveMixture(std::vector<PredictiveDistribution> at) : at_(std::move(at)) {}

  std::size_t size() const noexcept { return at_.size(); }
  bool empty() const noexcept { return at_.empty(); }
  const PredictiveDistribution& operator[](std::size_t i) const { return at_[i]; }
  const std::vector<PredictiveDistribution>& distributions() const noexcept { return at_; }

  Eigen::VectorXd means() const;
  Eigen::VectorXd variances() const;

  auto begin() const noexcept { return at_.begin(); }
  auto end() const noexcept { return at_.end(); }

 private:
  std::vector<PredictiveDistribution> at_;
};

}  // namespace mrepp
