#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace mrepp::detail {

/// Cholesky of a symmetric matrix; throws SingularMatrixError (naming
/// `what`) when a pivot is non-positive or smaller than `rel_pivot_floor`
/// times the largest diagonal entry.
Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& m, std::string_view what,
                                     double rel_pivot_floor = 0.0);

/// Cholesky with escalating diagonal jitter: tries `jitter`, then x10 up to
/// `max_jitter`. Returns the factor and reports the jitter that worked.
Eigen::LLT<Eigen::MatrixXd> cholesky_with_jitter(Eigen::MatrixXd m, double jitter,
                                                 double max_jitter, std::string_view what,
                                                 double* used = nullptr);

bool all_finite(const Eigen::VectorXd& v);

}  // namespace mrepp::detail
