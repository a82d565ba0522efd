#pragma once

// Support-point Voronoi tessellation (SPVT) with overlapping regions.
//
// Sites are support points of the training locations. Region k contains its
// Voronoi cell plus every point whose signed distance to each (k, j) bisector,
//
//   d_kj(s) = (|s - u_j|^2 - |s - u_k|^2) / (2 |u_k - u_j|),
//
// is at least -delta. Horizontal weights use the truncated localization kernel
// exp(-|s - u_k|^2 / dist_k(s)) where dist_k is the squared distance to the
// nearest expanded bisector, so weights vanish continuously at region edges.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrepp/kernels.hpp"
#include "mrepp/support_points.hpp"

namespace mrepp {

/// Overlap radius: either an absolute distance or a multiple of the median
/// pairwise distance between sites.
struct Overlap {
  double value = 0.1;
  bool relative = true;

  static Overlap absolute(double delta) { return {delta, false}; }
  static Overlap relative_to_sites(double factor) { return {factor, true}; }

  double resolve(std::span<const Location> sites) const;
};

/// Median over all site pairs of the pairwise Euclidean distance; 0 for K < 2.
double median_site_distance(std::span<const Location> sites);

struct Region {
  std::size_t index = 0;
  Location site;
  double delta = 0.0;
  LocationList inducing;
  std::vector<std::size_t> members;
};

class Partition {
 public:
  static constexpr double kNoBoundary = std::numeric_limits<double>::infinity();

  /// Sites = support_points(locations, K); local inducing points are support
  /// points of each region's members, min(m, max(1, |members|/2)) of them.
  /// Throws BuildError if a region ends up empty.
  static Partition build_spvt(std::span<const Location> locations, std::size_t K, std::size_t m,
                              Overlap overlap, const SPSolverConfig& cfg = {});

  /// Same construction with caller-provided sites.
  static Partition from_sites(std::span<const Location> locations, LocationList sites,
                              std::size_t m, Overlap overlap, const SPSolverConfig& cfg = {});

  std::size_t size() const noexcept { return regions_.size(); }
  const std::vector<Region>& regions() const noexcept { return regions_; }
  const Region& region(std::size_t k) const { return regions_.at(k); }
  const LocationList& sites() const noexcept { return sites_; }
  double delta() const noexcept { return delta_; }

  /// Nearest site, lowest index on ties.
  std::size_t nearest_site(const Location& s) const;

  /// Positive on u_k's side of the (k, j) bisector.
  double signed_bisector_distance(std::size_t k, std::size_t j, const Location& s) const;

  bool contains(std::size_t k, const Location& s) const;
  std::vector<std::size_t> membership(const Location& s) const;

  /// Squared distance from s to the nearest expanded bisector of region k,
  /// kNoBoundary when K == 1. Throws DomainError if s is not in region k.
  double boundary_distance(std::size_t k, const Location& s) const;

  /// Normalized localization weights over all K regions (zero for
  /// non-members). Falls back to the nearest-site indicator when every
  /// member weight underflows.
  std::vector<double> horizontal_weights(const Location& s) const;

  /// Largest member count divided by the smallest expected share n/K, and the
  /// reverse; both should stay below 4 for a balanced tessellation.
  double imbalance_ratio(std::size_t n) const;

  nlohmann::ordered_json to_json() const;

 private:
  Partition() = default;
  double boundary_slack(std::size_t k, const Location& s) const;

  LocationList sites_;
  std::vector<Region> regions_;
  double delta_ = 0.0;
};

}  // namespace mrepp
