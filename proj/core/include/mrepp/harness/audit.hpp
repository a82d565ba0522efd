#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mrepp/gp_exact.hpp"
#include "mrepp/harness/config.hpp"
#include "mrepp/pp.hpp"

namespace mrepp::harness {

/// One (n, m) cell of the influence audit. Influences and bounds are
/// averaged over replicates; fd_max_err is the worst over replicates.
struct AuditRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double max_infl_gp = 0.0;
  double bound_gp = 0.0;
  double max_infl_pp = 0.0;
  double bound_pp = 0.0;
  double fd_max_err = 0.0;
  std::size_t violations = 0;  ///< replicates where either bound failed
};

/// Central finite differences of the predictive mean at `target` with respect
/// to the observations in `indices`, compared with `influence`. Returns
/// max_i |fd_i - I_i| / max_i |I_i|.
double fd_error(const GPFit& fit, const Location& target, const Eigen::VectorXd& influence,
                std::span<const std::size_t> indices, double h);
double fd_error(const PPModel& model, const Location& target, const Eigen::VectorXd& influence,
                std::span<const std::size_t> indices, double h);

std::vector<AuditRow> influence_audit(const ExperimentConfig& cfg);

void write_audit_csv(std::ostream& os, const std::vector<AuditRow>& rows);

}  // namespace mrepp::harness
