#pragma once

// Ensembles of predictive processes.
//
// EPP: one PP per SPVT region, mixed with the horizontal localization
// weights. MREPP: several EPPs at increasing resolution K_1 < ... < K_L,
// mixed with resolution weights p on the simplex; component weights are
// p(l) * pi_k(s | level l), so the MREPP mean is linear in p.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mrepp/kernels.hpp"
#include "mrepp/mixture.hpp"
#include "mrepp/partition.hpp"
#include "mrepp/pp.hpp"
#include "mrepp/support_points.hpp"

namespace mrepp {

class EPPModel {
 public:
  static EPPModel fit(std::span<const Location> locations, const Eigen::VectorXd& values,
                      std::size_t K, std::size_t m, Overlap overlap, const KernelParams& params,
                      const SPSolverConfig& cfg = {});

  /// Fits one PP per region of an existing partition on that region's members.
  static EPPModel fit_on_partition(std::span<const Location> locations,
                                   const Eigen::VectorXd& values, Partition partition,
                                   const KernelParams& params);

  PredictiveMixture predict(std::span<const Location> targets) const;
  PredictiveDistribution predict_one(const Location& target) const;

  /// Localization-weighted mean only; cheaper than predict_one.
  double mean_at(const Location& target) const;

  std::size_t size() const noexcept { return region_models_.size(); }
  const Partition& partition() const noexcept { return partition_; }
  const std::vector<PPModel>& region_models() const noexcept { return region_models_; }
  const KernelParams& params() const noexcept { return params_; }

 private:
  EPPModel(Partition partition, std::vector<PPModel> models, KernelParams params)
      : partition_(std::move(partition)), region_models_(std::move(models)), params_(params) {}

  Partition partition_;
  std::vector<PPModel> region_models_;
  KernelParams params_;
};

struct LevelConfig {
  std::size_t K = 1;
  std::size_t m = 1;
  Overlap overlap;
};

class MREPPModel {
 public:
  /// Fits every level independently; p starts uniform. Throws InputError when
  /// no levels are given or K is not strictly increasing.
  static MREPPModel fit(std::span<const Location> locations, const Eigen::VectorXd& values,
                        std::span<const LevelConfig> levels, const KernelParams& params,
                        const SPSolverConfig& cfg = {});

  static MREPPModel from_levels(std::vector<EPPModel> levels);

  /// Throws InputError unless p has L non-negative entries summing to 1.
  void set_weights(std::vector<double> p);
  const std::vector<double>& weights() const noexcept { return weights_; }

  PredictiveMixture predict(std::span<const Location> targets) const;
  PredictiveDistribution predict_one(const Location& target) const;

  /// n x L matrix of per-level localization-weighted means.
  Eigen::MatrixXd level_means(std::span<const Location> targets) const;

  std::size_t depth() const noexcept { return levels_.size(); }
  const std::vector<EPPModel>& levels() const noexcept { return levels_; }

  nlohmann::ordered_json to_json() const;

 private:
  explicit MREPPModel(std::vector<EPPModel> levels);

  std::vector<EPPModel> levels_;
  std::vector<double> weights_;
};

struct SimplexFitResult {
  std::vector<double> weights;
  double objective = 0.0;          ///< mean squared error at the solution
  double uniform_objective = 0.0;  ///< mean squared error at p = 1/L
  int iterations = 0;
};

/// argmin_p (1/n) |A p - y|^2 over the probability simplex, by projected
/// gradient descent from the uniform vector with step 1/Lipschitz. Stops when
/// the objective changes by less than 1e-10 or after 1e4 iterations.
SimplexFitResult fit_simplex_weights(const Eigen::MatrixXd& level_predictions,
                                     const Eigen::VectorXd& targets);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Calibration-set MSE minimizing resolution weights. Throws InputError when
/// there are fewer calibration points than levels.
SimplexFitResult learn_resolution_weights(const MREPPModel& model,
                                          std::span<const Location> calib_locations,
                                          const Eigen::VectorXd& calib_values);

}  // namespace mrepp
