#include "mrepp/gp_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "linalg.hpp"
#include "mrepp/errors.hpp"
#include "mrepp/rng.hpp"

namespace mrepp {
namespace {

bool has_duplicates(std::span<const Location> locations) {
  LocationList sorted(locations.begin(), locations.end());
  std::sort(sorted.begin(), sorted.end(), [](const Location& a, const Location& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

void check_finite(std::span<const Location> locations) {
  for (const auto& s : locations) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
      throw InputError("locations must have finite coordinates");
    }
  }
}

}  // namespace

std::size_t nearest_index(std::span<const Location> set, const Location& target) {
  if (set.empty()) throw InputError("nearest_index: empty location set");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double d2 = squared_distance(set[i], target);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

GPFit GPFit::fit(LocationList locations, Eigen::VectorXd values, const KernelParams& params) {
  params.validate();
  if (locations.empty()) throw InputError("gp_fit: at least one training location is required");
  if (static_cast<Eigen::Index>(locations.size()) != values.size()) {
    throw InputError("gp_fit: locations and values differ in length");
  }
  if (!values.allFinite()) throw InputError("gp_fit: values must be finite");
  check_finite(locations);
  if (params.tau2 == 0.0 && has_duplicates(locations)) {
    throw SingularMatrixError("gp_fit: duplicated locations without a nugget");
  }

  Eigen::MatrixXd cov = cov_matrix(locations, params);
  cov.diagonal().array() += params.tau2 > 0.0 ? params.tau2 : params.jitter();

  GPFit out;
  out.llt_ = detail::cholesky(cov, "gp_fit");
  out.locations_ = std::move(locations);
  out.values_ = std::move(values);
  out.params_ = params;
  out.alpha_ = out.llt_.solve(out.values_);
  return out;
}

GPFit GPFit::with_values(Eigen::VectorXd values) const {
  if (values.size() != values_.size()) throw InputError("with_values: length mismatch");
  if (!values.allFinite()) throw InputError("with_values: values must be finite");
  GPFit out = *this;
  out.values_ = std::move(values);
  out.alpha_ = out.llt_.solve(out.values_);
  return out;
}

PredictiveDistribution GPFit::predict_one(const Location& target) const {
  const Eigen::VectorXd c = cov_vector(locations_, target, params_);
  const double mean = c.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(c);
  const double latent = std::max(params_.eta2 - v.squaredNorm(), 0.0);
  return PredictiveDistribution::gaussian(mean, latent + params_.tau2);
}

PredictiveMixture GPFit::predict(std::span<const Location> targets) const {
  if (targets.empty()) return {};
  const Eigen::MatrixXd cross = cov_matrix(locations_, targets, params_);  // n x N
  const Eigen::VectorXd means = cross.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(cross);
  const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();

  std::vector<PredictiveDistribution> out;
  out.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double latent = std::max(params_.eta2 - explained(i), 0.0);
    out.push_back(PredictiveDistribution::gaussian(means(i), latent + params_.tau2));
  }
  return PredictiveMixture(std::move(out));
}

InfluenceResult GPFit::influence(const Location& target) const {
  if (!(params_.tau2 > 0.0)) throw ConfigError("gp_influence: requires tau2 > 0");
  const Eigen::VectorXd c = cov_vector(locations_, target, params_);
  InfluenceResult out;
  out.influence = llt_.solve(c);
  const std::size_t nn = nearest_index(locations_, target);
  out.bound = std::sqrt(static_cast<double>(size())) / params_.tau2 * c(nn);
  return out;
}

GPDraw gp_draw(std::span<const Location> locations, const KernelParams& params,
               std::uint64_t seed) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(locations.size());
  GPDraw out;
  out.latent = Eigen::VectorXd::Zero(n);
  out.observed = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;

  // Near-coincident locations make C numerically indefinite; the jitter
  // escalates up to 1e-4 eta2, far below any nugget used in practice.
  const auto llt = detail::cholesky_with_jitter(cov_matrix(locations, params), params.jitter(),
                                                1e-4 * params.eta2, "gp_sample");

  std::normal_distribution<double> normal(0.0, 1.0);
  Rng field_rng = make_rng(seed, Stream::kLatentField);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(field_rng);
  out.latent = llt.matrixL() * z;

  Rng noise_rng = make_rng(seed, Stream::kNoise);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sd = std::sqrt(params.tau2);
  for (Eigen::Index i = 0; i < n; ++i) out.observed(i) = out.latent(i) + sd * noise(noise_rng);
  return out;
}

Eigen::VectorXd gp_sample(std::span<const Location> locations, const KernelParams& params,
                          std::uint64_t seed) {
  return gp_draw(locations, params, seed).observed;
}

}  // namespace mrepp
