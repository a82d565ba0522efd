#pragma once

// Energy distance and support-point selection.
//
// Support points are the m-point set minimizing the energy distance to an
// empirical sample. They are found with the convex-concave majorization
// iteration
//
//   s_i <- [ (N/m) sum_{j!=i} (s_i - s_j)/|s_i - s_j| + sum_n x_n/|x_n - s_i| ]
//          / sum_n 1/|x_n - s_i|
//
// started from m distinct sample points.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrepp/kernels.hpp"

namespace mrepp {

struct SPSolverConfig {
  int max_iters = 100;
  double tol = 1e-6;  ///< relative energy change that stops the iteration
  std::uint64_t seed = 0;

  void validate() const;
};

/// E = (2/(mN)) sum_i sum_n |x_n - s_i| - (1/N^2) sum_{n,n'} |x_n - x_n'|
///     - (1/m^2) sum_{i,j} |s_i - s_j|
/// with x the sample (N points) and s the candidates (m points).
double energy_distance(std::span<const Location> sample, std::span<const Location> candidates);

struct SupportPointsResult {
  LocationList points;
  std::vector<double> energy_trace;  ///< energy of every accepted iterate, init first
  int iterations = 0;

  double energy() const { return energy_trace.empty() ? 0.0 : energy_trace.back(); }
};

/// m support points of `sample`, initialized from m distinct sample points
/// drawn with cfg.seed. Throws InputError if m == 0 or m > |sample|.
SupportPointsResult support_points(std::span<const Location> sample, std::size_t m,
                                   const SPSolverConfig& cfg = {});

/// Runs the iteration from an explicit initialization.
SupportPointsResult support_points_from(std::span<const Location> sample, LocationList init,
                                        const SPSolverConfig& cfg = {});

}  // namespace mrepp
