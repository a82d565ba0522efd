#include "mrepp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mrepp/errors.hpp"
#include "mrepp/rng.hpp"

namespace mrepp {
namespace {

constexpr double kSimplexTol = 1e-9;
constexpr double kObjectiveTol = 1e-10;
constexpr int kMaxSimplexIters = 10000;

}  // namespace

// ---------------------------------------------------------------------------
// EPP

EPPModel EPPModel::fit(std::span<const Location> locations, const Eigen::VectorXd& values,
                       std::size_t K, std::size_t m, Overlap overlap, const KernelParams& params,
                       const SPSolverConfig& cfg) {
  params.validate();
  if (static_cast<Eigen::Index>(locations.size()) != values.size()) {
    throw InputError("epp_fit: locations and values differ in length");
  }
  return fit_on_partition(locations, values, Partition::build_spvt(locations, K, m, overlap, cfg),
                          params);
}

EPPModel EPPModel::fit_on_partition(std::span<const Location> locations,
                                    const Eigen::VectorXd& values, Partition partition,
                                    const KernelParams& params) {
  if (static_cast<Eigen::Index>(locations.size()) != values.size()) {
    throw InputError("epp_fit: locations and values differ in length");
  }
  std::vector<PPModel> models;
  models.reserve(partition.size());
  for (const Region& region : partition.regions()) {
    LocationList local;
    Eigen::VectorXd local_values(static_cast<Eigen::Index>(region.members.size()));
    local.reserve(region.members.size());
    for (std::size_t i = 0; i < region.members.size(); ++i) {
      local.push_back(locations[region.members[i]]);
      local_values(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(region.members[i]));
    }
    models.push_back(PPModel::fit(std::move(local), std::move(local_values), region.inducing, params));
  }
  return EPPModel(std::move(partition), std::move(models), params);
}

PredictiveDistribution EPPModel::predict_one(const Location& target) const {
  const std::vector<double> w = partition_.horizontal_weights(target);
  std::vector<MixtureComponent> components;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    const PredictiveDistribution local = region_models_[k].predict_one(target);
    components.push_back({w[k], local.mean, local.variance});
  }
  return PredictiveDistribution::from_components(std::move(components));
}

PredictiveMixture EPPModel::predict(std::span<const Location> targets) const {
  std::vector<PredictiveDistribution> out;
  out.reserve(targets.size());
  for (const auto& s : targets) out.push_back(predict_one(s));
  return PredictiveMixture(std::move(out));
}

double EPPModel::mean_at(const Location& target) const {
  const std::vector<double> w = partition_.horizontal_weights(target);
  double mean = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] > 0.0) mean += w[k] * region_models_[k].mean_at(target);
  }
  return mean;
}

// ---------------------------------------------------------------------------
// MREPP

MREPPModel::MREPPModel(std::vector<EPPModel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InputError("mrepp: at least one level is required");
  for (std::size_t l = 1; l < levels_.size(); ++l) {
    if (levels_[l].size() <= levels_[l - 1].size()) {
      throw InputError("mrepp: K must be strictly increasing across levels");
    }
  }
  weights_.assign(levels_.size(), 1.0 / static_cast<double>(levels_.size()));
}

MREPPModel MREPPModel::from_levels(std::vector<EPPModel> levels) {
  return MREPPModel(std::move(levels));
}

MREPPModel MREPPModel::fit(std::span<const Location> locations, const Eigen::VectorXd& values,
                           std::span<const LevelConfig> levels, const KernelParams& params,
                           const SPSolverConfig& cfg) {
  if (levels.empty()) throw InputError("mrepp_fit: at least one level is required");
  for (std::size_t l = 1; l < levels.size(); ++l) {
    if (levels[l].K <= levels[l - 1].K) {
      throw InputError("mrepp_fit: K must be strictly increasing across levels");
    }
  }
  std::vector<EPPModel> fitted;
  fitted.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    SPSolverConfig level_cfg = cfg;
    level_cfg.seed = derive_seed(cfg.seed, Stream::kSupportPoints, 1000 + l);
    fitted.push_back(EPPModel::fit(locations, values, levels[l].K, levels[l].m, levels[l].overlap,
                                   params, level_cfg));
  }
  return MREPPModel(std::move(fitted));
}

void MREPPModel::set_weights(std::vector<double> p) {
  if (p.size() != levels_.size()) {
    throw InputError("mrepp: expected " + std::to_string(levels_.size()) + " resolution weights");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("mrepp: weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) throw InputError("mrepp: weights must sum to 1");
  weights_ = std::move(p);
}

PredictiveDistribution MREPPModel::predict_one(const Location& target) const {
  std::vector<MixtureComponent> components;
  double total = 0.0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (weights_[l] <= 0.0) continue;
    const EPPModel& level = levels_[l];
    const std::vector<double> w = level.partition().horizontal_weights(target);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double combined = weights_[l] * w[k];
      if (combined <= 0.0) continue;
      const PredictiveDistribution local = level.region_models()[k].predict_one(target);
      components.push_back({combined, local.mean, local.variance});
      total += combined;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& c : components) c.weight /= total;
  }
  return PredictiveDistribution::from_components(std::move(components));
}

PredictiveMixture MREPPModel::predict(std::span<const Location> targets) const {
  std::vector<PredictiveDistribution> out;
  out.reserve(targets.size());
  for (const auto& s : targets) out.push_back(predict_one(s));
  return PredictiveMixture(std::move(out));
}

Eigen::MatrixXd MREPPModel::level_means(std::span<const Location> targets) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(targets.size()),
                      static_cast<Eigen::Index>(levels_.size()));
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = levels_[l].mean_at(targets[i]);
    }
  }
  return out;
}

nlohmann::ordered_json MREPPModel::to_json() const {
  nlohmann::ordered_json j;
  j["depth"] = levels_.size();
  j["weights"] = weights_;
  j["levels"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const Partition& part = levels_[l].partition();
    std::size_t m = 0;
    for (const auto& r : part.regions()) m = std::max(m, r.inducing.size());
    nlohmann::ordered_json jl;
    jl["level"] = l + 1;
    jl["K"] = part.size();
    jl["m"] = m;
    jl["delta"] = part.delta();
    jl["partition"] = part.to_json();
    j["levels"].push_back(std::move(jl));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Resolution weights

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

SimplexFitResult fit_simplex_weights(const Eigen::MatrixXd& level_predictions,
                                     const Eigen::VectorXd& targets) {
  const Eigen::Index n = level_predictions.rows();
  const Eigen::Index L = level_predictions.cols();
  if (L == 0) throw InputError("resolution weights: no levels");
  if (n != targets.size()) throw InputError("resolution weights: length mismatch");
  if (n < L) {
    throw InputError("resolution weights: need at least as many calibration points as levels");
  }
  const double nd = static_cast<double>(n);
  auto objective = [&](const Eigen::VectorXd& p) {
    return (level_predictions * p - targets).squaredNorm() / nd;
  };

  SimplexFitResult out;
  Eigen::VectorXd p = Eigen::VectorXd::Constant(L, 1.0 / static_cast<double>(L));
  out.uniform_objective = objective(p);

  if (L > 1) {
    const Eigen::MatrixXd gram = level_predictions.transpose() * level_predictions / nd;
    const Eigen::VectorXd linear = level_predictions.transpose() * targets / nd;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lipschitz = 2.0 * eig.eigenvalues().maxCoeff();
    if (lipschitz > 0.0) {
      double f = out.uniform_objective;
      for (int it = 0; it < kMaxSimplexIters; ++it) {
        const Eigen::VectorXd grad = 2.0 * (gram * p - linear);
        Eigen::VectorXd next = project_to_simplex(p - grad / lipschitz);
        const double f_next = objective(next);
        out.iterations = it + 1;
        const double change = f - f_next;
        if (f_next > f) break;
        p = std::move(next);
        f = f_next;
        if (change < kObjectiveTol) break;
      }
    }
  }
  out.weights.assign(p.data(), p.data() + L);
  out.objective = objective(p);
  return out;
}

SimplexFitResult learn_resolution_weights(const MREPPModel& model,
                                          std::span<const Location> calib_locations,
                                          const Eigen::VectorXd& calib_values) {
  if (static_cast<Eigen::Index>(calib_locations.size()) != calib_values.size()) {
    throw InputError("resolution weights: calibration locations and values differ in length");
  }
  if (calib_locations.size() < model.depth()) {
    throw InputError("resolution weights: fewer calibration points than levels");
  }
  return fit_simplex_weights(model.level_means(calib_locations), calib_values);
}

}  // namespace mrepp
