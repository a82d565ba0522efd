#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "mrepp/kernels.hpp"
#include "mrepp/mixture.hpp"

namespace mrepp {

/// Influence vector of the training observations on the predictive mean at
/// one target, together with its analytic sup-norm bound.
struct InfluenceResult {
  Eigen::VectorXd influence;
  double bound = 0.0;

  double max_abs() const { return influence.size() ? influence.cwiseAbs().maxCoeff() : 0.0; }
  bool bound_satisfied() const { return max_abs() <= bound; }
};

/// Exact Gaussian-process fit: the Cholesky factor of C_nn + tau2 I and the
/// weights (C_nn + tau2 I)^-1 y, cached for prediction and influence queries.
class GPFit {
 public:
  /// Throws InputError on size mismatch or non-finite values and
  /// SingularMatrixError when the covariance cannot be factorized (e.g.
  /// duplicated locations without a nugget).
  static GPFit fit(LocationList locations, Eigen::VectorXd values, const KernelParams& params);

  /// Same factorization, new observation vector.
  GPFit with_values(Eigen::VectorXd values) const;

  /// Single-component predictive distributions. The variance is that of a
  /// new noisy observation: c(s,s) - c' (C + tau2 I)^-1 c + tau2.
  PredictiveMixture predict(std::span<const Location> targets) const;
  PredictiveDistribution predict_one(const Location& target) const;

  /// I(s*) = (C_nn + tau2 I)^-1 c_n*, bounded by sqrt(n)/tau2 c(s_N, s*)
  /// with s_N the nearest training location. Requires tau2 > 0.
  InfluenceResult influence(const Location& target) const;

  std::size_t size() const noexcept { return locations_.size(); }
  const LocationList& locations() const noexcept { return locations_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  const KernelParams& params() const noexcept { return params_; }
  Eigen::MatrixXd chol() const { return llt_.matrixL(); }

 private:
  GPFit() = default;

  LocationList locations_;
  Eigen::VectorXd values_;
  KernelParams params_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

/// A joint draw of the latent field and the noisy observations.
struct GPDraw {
  Eigen::VectorXd latent;
  Eigen::VectorXd observed;
};

/// Draws w ~ N(0, C) with independent N(0, tau2) noise on top. The latent
/// field and the noise use separate sub-streams of `seed`.
GPDraw gp_draw(std::span<const Location> locations, const KernelParams& params,
               std::uint64_t seed);

/// Observation vector y = w + eps; deterministic given the seed.
Eigen::VectorXd gp_sample(std::span<const Location> locations, const KernelParams& params,
                          std::uint64_t seed);

/// Index of the location in `set` closest to `target` (lowest index on ties).
std::size_t nearest_index(std::span<const Location> set, const Location& target);

}  // namespace mrepp
