#pragma once

#include <span>

#include <Eigen/Dense>

#include "mrepp/gp_exact.hpp"
#include "mrepp/kernels.hpp"
#include "mrepp/mixture.hpp"

namespace mrepp {

struct PPInfluenceResult : InfluenceResult {
  double e_min = 0.0;  ///< smallest eigenvalue of C_nm' C_nm / n
};

/// Predictive process on m inducing points. Caches the Cholesky factors of
///   A    = tau2 C_mm + C_mn C_nm
///   C_mm (+ jitter only if it fails to factor)
/// and b = C_mn y, so every query costs O(m^2) after an O(n m^2) fit.
class PPModel {
 public:
  /// Throws InputError if inducing is empty or larger than the training set,
  /// SingularMatrixError if A is not positive definite.
  static PPModel fit(LocationList locations, Eigen::VectorXd values, LocationList inducing,
                     const KernelParams& params);

  PPModel with_values(Eigen::VectorXd values) const;

  /// mean = c_*m A^-1 b
  /// variance = c(s,s) - c_*m C_mm^-1 c_m* + tau2 c_*m A^-1 c_m* + tau2
  PredictiveMixture predict(std::span<const Location> targets) const;
  PredictiveDistribution predict_one(const Location& target) const;
  double mean_at(const Location& target) const;

  /// I_m(s*) = C_nm A^-1 c_m*, bounded by m sqrt(m) eta2 / (n e_min) times
  /// the covariance to the nearest inducing point. The bound is +inf when
  /// e_min <= 1e-12.
  PPInfluenceResult influence(const Location& target) const;

  std::size_t size() const noexcept { return locations_.size(); }
  std::size_t rank() const noexcept { return inducing_.size(); }
  const LocationList& inducing() const noexcept { return inducing_; }
  const LocationList& locations() const noexcept { return locations_; }
  const KernelParams& params() const noexcept { return params_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  PPModel() = default;
  bool factor(const Eigen::MatrixXd& cmm, double tau2, bool strict);

  LocationList locations_;
  Eigen::VectorXd values_;
  LocationList inducing_;
  KernelParams params_;
  Eigen::MatrixXd cross_;  // C_nm
  Eigen::LLT<Eigen::MatrixXd> a_llt_;
  Eigen::LLT<Eigen::MatrixXd> cmm_llt_;
  Eigen::VectorXd weights_;  // A^-1 C_mn y
};

}  // namespace mrepp
