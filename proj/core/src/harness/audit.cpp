#include "mrepp/harness/audit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mrepp/errors.hpp"
#include "mrepp/rng.hpp"
#include "mrepp/simgen.hpp"
#include "mrepp/support_points.hpp"
#include "parallel.hpp"

namespace mrepp::harness {
namespace {

template <typename Model>
double fd_error_impl(const Model& model, const Location& target, const Eigen::VectorXd& influence,
                     std::span<const std::size_t> indices, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const double scale = influence.size() ? influence.cwiseAbs().maxCoeff() : 0.0;
  if (!(scale > 0.0)) return 0.0;
  double worst = 0.0;
  Eigen::VectorXd y = model.values();
  for (std::size_t i : indices) {
    if (i >= static_cast<std::size_t>(y.size())) throw InputError("fd index out of range");
    const auto k = static_cast<Eigen::Index>(i);
    const double base = y(k);
    y(k) = base + h;
    const double up = model.with_values(y).predict_one(target).mean;
    y(k) = base - h;
    const double down = model.with_values(y).predict_one(target).mean;
    y(k) = base;
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - influence(k)));
  }
  return worst / scale;
}

// Evenly spread indices plus the one carrying the largest influence.
std::vector<std::size_t> check_indices(const Eigen::VectorXd& influence, std::size_t count) {
  const auto n = static_cast<std::size_t>(influence.size());
  std::vector<std::size_t> idx;
  Eigen::Index arg = 0;
  influence.cwiseAbs().maxCoeff(&arg);
  idx.push_back(static_cast<std::size_t>(arg));
  const std::size_t k = std::min(count, n);
  for (std::size_t j = 0; j < k; ++j) idx.push_back(j * n / std::max<std::size_t>(k, 1));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

struct Cell {
  double infl_gp = 0, bound_gp = 0, infl_pp = 0, bound_pp = 0, fd = 0;
  bool violated = false;
};

}  // namespace

double fd_error(const GPFit& fit, const Location& target, const Eigen::VectorXd& influence,
                std::span<const std::size_t> indices, double h) {
  return fd_error_impl(fit, target, influence, indices, h);
}

double fd_error(const PPModel& model, const Location& target, const Eigen::VectorXd& influence,
                std::span<const std::size_t> indices, double h) {
  return fd_error_impl(model, target, influence, indices, h);
}

std::vector<AuditRow> influence_audit(const ExperimentConfig& cfg) {
  const auto& ia = cfg.influence;
  if (ia.n_grid.empty() || ia.m_grid.empty() || ia.replicates == 0) {
    throw ConfigError("influence audit needs n_grid, m_grid and replicates > 0");
  }
  if (!(cfg.scenario.params.tau2 > 0.0)) throw ConfigError("influence audit requires tau2 > 0");
  for (std::size_t m : ia.m_grid) {
    for (std::size_t n : ia.n_grid) {
      if (m == 0 || m > n) throw ConfigError("influence audit: need 1 <= m <= n");
    }
  }

  const std::size_t N = ia.n_grid.size(), M = ia.m_grid.size(), R = ia.replicates;
  std::vector<Cell> cells(N * M * R);
  detail::parallel_for(N * R, cfg.parallel_jobs, [&](std::size_t job) {
    const std::size_t ni = job / R, r = job % R;
    ScenarioConfig sc = cfg.scenario;
    sc.n = ia.n_grid[ni];
    sc.n_test = 1;
    sc.seed = cfg.scenario.seed + r;
    const Dataset data = generate(sc);

    const GPFit gp = GPFit::fit(data.train_locations, data.train_values, sc.params);
    const InfluenceResult gi = gp.influence(ia.target);
    const auto gidx = check_indices(gi.influence, ia.fd_checks);
    const double gp_fd = fd_error(gp, ia.target, gi.influence, gidx, ia.fd_step);

    for (std::size_t mi = 0; mi < M; ++mi) {
      SPSolverConfig sp = cfg.support_points;
      sp.seed = derive_seed(sc.seed, Stream::kAuditDesign, ia.m_grid[mi]);
      auto inducing = support_points(data.train_locations, ia.m_grid[mi], sp).points;
      const PPModel pp =
          PPModel::fit(data.train_locations, data.train_values, std::move(inducing), sc.params);
      const PPInfluenceResult pi = pp.influence(ia.target);
      const auto pidx = check_indices(pi.influence, ia.fd_checks);

      Cell& c = cells[(ni * M + mi) * R + r];
      c.infl_gp = gi.max_abs();
      c.bound_gp = gi.bound;
      c.infl_pp = pi.max_abs();
      c.bound_pp = pi.bound;
      c.fd = std::max(gp_fd, fd_error(pp, ia.target, pi.influence, pidx, ia.fd_step));
      c.violated = !gi.bound_satisfied() || !pi.bound_satisfied();
    }
  });

  std::vector<AuditRow> rows;
  for (std::size_t ni = 0; ni < N; ++ni) {
    for (std::size_t mi = 0; mi < M; ++mi) {
      AuditRow row;
      row.n = ia.n_grid[ni];
      row.m = ia.m_grid[mi];
      for (std::size_t r = 0; r < R; ++r) {
        const Cell& c = cells[(ni * M + mi) * R + r];
        row.max_infl_gp += c.infl_gp / static_cast<double>(R);
        row.bound_gp += c.bound_gp / static_cast<double>(R);
        row.max_infl_pp += c.infl_pp / static_cast<double>(R);
        row.bound_pp += c.bound_pp / static_cast<double>(R);
        row.fd_max_err = std::max(row.fd_max_err, c.fd);
        row.violations += c.violated ? 1 : 0;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_audit_csv(std::ostream& os, const std::vector<AuditRow>& rows) {
  os << "n,m,max_infl_gp,bound_gp,max_infl_pp,bound_pp,fd_max_err\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.m << ',' << format_number(r.max_infl_gp) << ','
       << format_number(r.bound_gp) << ',' << format_number(r.max_infl_pp) << ','
       << format_number(r.bound_pp) << ',' << format_number(r.fd_max_err) << '\n';
  }
}

}  // namespace mrepp::harness
