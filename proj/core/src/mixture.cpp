#include "mrepp/mixture.hpp"

#include <algorithm>

namespace mrepp {

void mixture_moments(std::span<const MixtureComponent> components, double& mean,
                     double& variance) noexcept {
  mean = 0.0;
  for (const auto& c : components) mean += c.weight * c.mean;
  variance = 0.0;
  for (const auto& c : components) {
    const double dev = c.mean - mean;
    variance += c.weight * (c.variance + dev * dev);
  }
  variance = std::max(variance, 0.0);
}

PredictiveDistribution PredictiveDistribution::gaussian(double mean, double variance) {
  PredictiveDistribution d;
  d.components.push_back({1.0, mean, variance});
  d.mean = mean;
  d.variance = variance;
  return d;
}

PredictiveDistribution PredictiveDistribution::from_components(
    std::vector<MixtureComponent> components) {
  std::erase_if(components, [](const MixtureComponent& c) { return c.weight <= 0.0; });
  PredictiveDistribution d;
  d.components = std::move(components);
  mixture_moments(d.components, d.mean, d.variance);
  return d;
}

double PredictiveDistribution::weight_sum() const noexcept {
  double s = 0.0;
  for (const auto& c : components) s += c.weight;
  return s;
}

Eigen::VectorXd PredictiveMixture::means() const {
  Eigen::VectorXd out(at_.size());
  for (std::size_t i = 0; i < at_.size(); ++i) out(i) = at_[i].mean;
  return out;
}

Eigen::VectorXd PredictiveMixture::variances() const {
  Eigen::VectorXd out(at_.size());
  for (std::size_t i = 0; i < at_.size(); ++i) out(i) = at_[i].variance;
  return out;
}

}  // namespace mrepp
