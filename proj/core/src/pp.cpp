#include "mrepp/pp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "linalg.hpp"
#include "mrepp/errors.hpp"

namespace mrepp {
namespace {

// Relative pivot floor applied when tau2 = 0 and A = C_mn C_nm carries no
// regularization of its own.
constexpr double kNoiselessPivotFloor = 1e-12;
constexpr double kEigenFloor = 1e-12;
// Below this relative pivot an unjittered factor is treated as singular.
constexpr double kUnjitteredPivotFloor = 1e-14;

}  // namespace

PPModel PPModel::fit(LocationList locations, Eigen::VectorXd values, LocationList inducing,
                     const KernelParams& params) {
  params.validate();
  if (inducing.empty()) throw InputError("pp_fit: at least one inducing point is required");
  if (inducing.size() > locations.size()) {
    throw InputError("pp_fit: " + std::to_string(inducing.size()) +
                     " inducing points exceed the " + std::to_string(locations.size()) +
                     " training locations");
  }
  if (static_cast<Eigen::Index>(locations.size()) != values.size()) {
    throw InputError("pp_fit: locations and values differ in length");
  }
  if (!values.allFinite()) throw InputError("pp_fit: values must be finite");

  PPModel out;
  out.cross_ = cov_matrix(locations, inducing, params);
  Eigen::MatrixXd cmm = cov_matrix(inducing, params);
  // Jitter only when needed, so that m = n reproduces the exact GP.
  if (!out.factor(cmm, params.tau2, false)) {
    cmm.diagonal().array() += params.jitter();
    out.factor(cmm, params.tau2, true);
  }

  out.locations_ = std::move(locations);
  out.values_ = std::move(values);
  out.inducing_ = std::move(inducing);
  out.params_ = params;
  out.weights_ = out.a_llt_.solve(out.cross_.transpose() * out.values_);
  return out;
}

bool PPModel::factor(const Eigen::MatrixXd& cmm, double tau2, bool strict) {
  auto positive = [](const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& m) {
    if (llt.info() != Eigen::Success) return false;
    const double min_pivot_sq = llt.matrixLLT().diagonal().cwiseAbs2().minCoeff();
    return min_pivot_sq > kUnjitteredPivotFloor * m.diagonal().cwiseAbs().maxCoeff();
  };
  Eigen::MatrixXd a = tau2 * cmm;
  a.selfadjointView<Eigen::Lower>().rankUpdate(cross_.transpose());
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  if (strict) {
    cmm_llt_ = detail::cholesky(cmm, "pp_fit (C_mm)");
    a_llt_ = detail::cholesky(a, "pp_fit (tau2 C_mm + C_mn C_nm)", tau2 > 0.0 ? 0.0 : kNoiselessPivotFloor);
    return true;
  }
  cmm_llt_.compute(cmm);
  if (!positive(cmm_llt_, cmm)) return false;
  a_llt_.compute(a);
  if (!positive(a_llt_, a)) return false;
  if (tau2 == 0.0) {
    const double min_pivot_sq = a_llt_.matrixLLT().diagonal().cwiseAbs2().minCoeff();
    if (min_pivot_sq <= kNoiselessPivotFloor * a.diagonal().cwiseAbs().maxCoeff()) return false;
  }
  return true;
}

PPModel PPModel::with_values(Eigen::VectorXd values) const {
  if (values.size() != values_.size()) throw InputError("with_values: length mismatch");
  if (!values.allFinite()) throw InputError("with_values: values must be finite");
  PPModel out = *this;
  out.values_ = std::move(values);
  out.weights_ = out.a_llt_.solve(out.cross_.transpose() * out.values_);
  return out;
}

double PPModel::mean_at(const Location& target) const {
  return cov_vector(inducing_, target, params_).dot(weights_);
}

PredictiveDistribution PPModel::predict_one(const Location& target) const {
  const Eigen::VectorXd c = cov_vector(inducing_, target, params_);
  const double mean = c.dot(weights_);
  const double projected = cmm_llt_.matrixL().solve(c).squaredNorm();
  const double correction = a_llt_.matrixL().solve(c).squaredNorm();
  const double latent = std::max(params_.eta2 - projected + params_.tau2 * correction, 0.0);
  return PredictiveDistribution::gaussian(mean, latent + params_.tau2);
}

PredictiveMixture PPModel::predict(std::span<const Location> targets) const {
  if (targets.empty()) return {};
  const Eigen::MatrixXd c = cov_matrix(inducing_, targets, params_);  // m x N
  const Eigen::VectorXd means = c.transpose() * weights_;
  const Eigen::VectorXd projected =
      cmm_llt_.matrixL().solve(c).colwise().squaredNorm().transpose();
  const Eigen::VectorXd correction = a_llt_.matrixL().solve(c).colwise().squaredNorm().transpose();

  std::vector<PredictiveDistribution> out;
  out.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double latent =
        std::max(params_.eta2 - projected(i) + params_.tau2 * correction(i), 0.0);
    out.push_back(PredictiveDistribution::gaussian(means(i), latent + params_.tau2));
  }
  return PredictiveMixture(std::move(out));
}

PPInfluenceResult PPModel::influence(const Location& target) const {
  if (!(params_.tau2 > 0.0)) throw ConfigError("pp_influence: requires tau2 > 0");
  const Eigen::VectorXd c = cov_vector(inducing_, target, params_);
  PPInfluenceResult out;
  out.influence = cross_ * a_llt_.solve(c);

  const double n = static_cast<double>(size());
  const double m = static_cast<double>(rank());
  const Eigen::MatrixXd gram = (cross_.transpose() * cross_) / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  out.e_min = eig.eigenvalues().minCoeff();
  if (out.e_min <= kEigenFloor) {
    out.bound = std::numeric_limits<double>::infinity();
  } else {
    const std::size_t nn = nearest_index(inducing_, target);
    out.bound = m * std::sqrt(m) * params_.eta2 / (n * out.e_min) * c(nn);
  }
  return out;
}

}  // namespace mrepp
