#include "linalg.hpp"

#include <cmath>
#include <string>

#include "mrepp/errors.hpp"

namespace mrepp::detail {

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& m, std::string_view what,
                                     double rel_pivot_floor) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError(std::string(what) + ": matrix is not positive definite");
  }
  if (m.rows() > 0) {
    const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
    const double min_pivot_sq = pivots.cwiseAbs2().minCoeff();
    const double max_diag = m.diagonal().cwiseAbs().maxCoeff();
    if (!std::isfinite(min_pivot_sq) || min_pivot_sq <= rel_pivot_floor * max_diag) {
      throw SingularMatrixError(std::string(what) + ": matrix is numerically singular");
    }
  }
  return llt;
}

Eigen::LLT<Eigen::MatrixXd> cholesky_with_jitter(Eigen::MatrixXd m, double jitter,
                                                 double max_jitter, std::string_view what,
                                                 double* used) {
  double applied = 0.0;
  for (double j = jitter;; j *= 10.0) {
    m.diagonal().array() += (j - applied);
    applied = j;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0.0) {
      if (used) *used = applied;
      return llt;
    }
    if (j * 10.0 > max_jitter * (1.0 + 1e-12)) break;
  }
  throw SingularMatrixError(std::string(what) + ": factorization failed even with jitter " +
                            std::to_string(applied));
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace mrepp::detail
