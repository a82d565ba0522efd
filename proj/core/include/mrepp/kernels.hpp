#pragma once

// Matérn covariance evaluation and covariance-matrix assembly.
//
// The correlation is parameterized with a = d / phi and the half-integer
// closed forms
//   nu = 1/2 : exp(-a)
//   nu = 3/2 : (1 + a) exp(-a)
//   nu = 5/2 : (1 + a + a^2/3) exp(-a)
// so that with (phi, nu) = (0.21, 1.5) or (0.33, 0.5) the correlation at unit
// distance is about 0.05 (effective range 1). Locations are planar.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mrepp {

struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

using LocationList = std::vector<Location>;

inline double squared_distance(const Location& a, const Location& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const Location& a, const Location& b) noexcept;

/// Matérn hyperparameters plus the Gaussian nugget.
struct KernelParams {
  double eta2 = 1.5;  ///< marginal variance
  double phi = 0.21;  ///< range
  double nu = 1.5;    ///< smoothness, one of 0.5, 1.5, 2.5
  double tau2 = 0.25; ///< nugget variance

  /// Throws ConfigError unless eta2 > 0, phi > 0, tau2 >= 0 and nu is a
  /// supported half-integer.
  void validate() const;

  /// Diagonal jitter used when a Cholesky of a noise-free covariance is needed.
  double jitter() const noexcept { return 1e-10 * eta2; }
};

/// Covariance at distance d. Throws ConfigError for unsupported nu.
double matern_cov(double d, const KernelParams& params);

/// |a| x |b| cross-covariance matrix.
Eigen::MatrixXd cov_matrix(std::span<const Location> a, std::span<const Location> b,
                           const KernelParams& params);

/// Symmetric covariance of a location set with itself; exactly symmetric.
Eigen::MatrixXd cov_matrix(std::span<const Location> a, const KernelParams& params);

/// Covariances between every location in `a` and a single target.
Eigen::VectorXd cov_vector(std::span<const Location> a, const Location& target,
                           const KernelParams& params);

}  // namespace mrepp
