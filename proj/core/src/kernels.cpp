#include "mrepp/kernels.hpp"

#include <cmath>
#include <string>

#include "mrepp/errors.hpp"

namespace mrepp {
namespace {

enum class Order { kHalf, kThreeHalves, kFiveHalves };

Order order_of(double nu) {
  if (nu == 0.5) return Order::kHalf;
  if (nu == 1.5) return Order::kThreeHalves;
  if (nu == 2.5) return Order::kFiveHalves;
  throw ConfigError("Matern smoothness nu must be 0.5, 1.5 or 2.5 (got " + std::to_string(nu) + ")");
}

inline double correlation(double a, Order order) noexcept {
  switch (order) {
    case Order::kHalf:
      return std::exp(-a);
    case Order::kThreeHalves:
      return (1.0 + a) * std::exp(-a);
    case Order::kFiveHalves:
      return (1.0 + a + a * a / 3.0) * std::exp(-a);
  }
  return 0.0;
}

}  // namespace

double distance(const Location& a, const Location& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

void KernelParams::validate() const {
  if (!(eta2 > 0.0) || !std::isfinite(eta2)) throw ConfigError("eta2 must be positive");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw ConfigError("phi must be positive");
  if (!(tau2 >= 0.0) || !std::isfinite(tau2)) throw ConfigError("tau2 must be non-negative");
  order_of(nu);
}

double matern_cov(double d, const KernelParams& params) {
  const Order order = order_of(params.nu);
  if (!(d >= 0.0)) throw InputError("matern_cov: distance must be non-negative");
  if (d == 0.0) return params.eta2;
  return params.eta2 * correlation(d / params.phi, order);
}

Eigen::MatrixXd cov_matrix(std::span<const Location> a, std::span<const Location> b,
                           const KernelParams& params) {
  const Order order = order_of(params.nu);
  const double inv_phi = 1.0 / params.phi;
  Eigen::MatrixXd out(a.size(), b.size());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const Location& bj = b[j];
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = params.eta2 * correlation(distance(a[i], bj) * inv_phi, order);
    }
  }
  return out;
}

Eigen::MatrixXd cov_matrix(std::span<const Location> a, const KernelParams& params) {
  const Order order = order_of(params.nu);
  const double inv_phi = 1.0 / params.phi;
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = params.eta2;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double c = params.eta2 * correlation(distance(a[i], a[j]) * inv_phi, order);
      out(i, j) = c;
      out(j, i) = c;
    }
  }
  return out;
}

Eigen::VectorXd cov_vector(std::span<const Location> a, const Location& target,
                           const KernelParams& params) {
  const Order order = order_of(params.nu);
  const double inv_phi = 1.0 / params.phi;
  Eigen::VectorXd out(a.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = params.eta2 * correlation(distance(a[i], target) * inv_phi, order);
  }
  return out;
}

}  // namespace mrepp
