#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "mrepp/kernels.hpp"

namespace mrepp::test {

inline LocationList uniform_locations(std::size_t n, std::uint64_t seed, double lo = -3.0,
                                      double hi = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  LocationList out(n);
  for (auto& p : out) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return out;
}

inline Eigen::VectorXd normal_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = z(rng);
  return v;
}

// Dense covariance assembled entry by entry from the closed forms, used as an
// oracle that does not go through the library's kernel code.
inline double matern_oracle(double d, double eta2, double phi, double nu) {
  const double a = d / phi;
  if (nu == 0.5) return eta2 * std::exp(-a);
  if (nu == 1.5) return eta2 * (1.0 + a) * std::exp(-a);
  return eta2 * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

inline Eigen::MatrixXd cov_oracle(const LocationList& a, const LocationList& b,
                                  const KernelParams& p) {
  Eigen::MatrixXd c(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      c(i, j) = matern_oracle(std::hypot(a[i].x - b[j].x, a[i].y - b[j].y), p.eta2, p.phi, p.nu);
    }
  }
  return c;
}

}  // namespace mrepp::test
