#pragma once

#include <cstdint>
#include <optional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrepp/kernels.hpp"

namespace mrepp {

enum class Scenario { kFixedSpace, kFixedRadius, kContaminated };

std::string to_string(Scenario s);
/// Accepts "FixedSpace", "FixedRadius", "Contaminated". Throws ConfigError.
Scenario parse_scenario(const std::string& name);

struct ScenarioConfig {
  Scenario scenario = Scenario::kFixedSpace;
  std::size_t n = 1000;
  std::size_t n_test = 500;
  KernelParams params;
  std::optional<double> contamination_value;
  double contamination_fraction = 0.01;
  double r_S_target = 0.001;
  std::uint64_t seed = 1;

  void validate() const;
  /// Number of overwritten training values, ceil(fraction * n).
  std::size_t contaminated_count() const;
};

struct BoundingBox {
  Location lo;
  Location hi;
};

struct Dataset {
  LocationList train_locations;
  Eigen::VectorXd train_values;
  LocationList test_locations;
  Eigen::VectorXd test_values;
  Eigen::VectorXd test_latent;  ///< noise-free field at the test locations
  std::vector<std::size_t> contaminated_indices;  ///< sorted, into the training set
  BoundingBox domain;
};

/// Fixed-space and contaminated scenarios draw locations uniformly on
/// [-3,3]^2. The fixed-radius scenario draws on [0,A]^2 with
/// A = 2 r_S sqrt(N/0.5) (N = n + n_test) and Poisson-disk thinning so the
/// separation radius never drops below r_S_target. Values are one joint GP
/// draw over train and test. Throws DomainTooDenseError if thinning fails.
Dataset generate(const ScenarioConfig& cfg);

/// Half the minimum pairwise distance. Throws InputError for < 2 locations.
double separation_radius(std::span<const Location> locations);

/// CSV with header `role,x,y,value,contaminated`. Training rows whose index
/// is flagged in `calibration` are written with role `calib`.
void write_dataset_csv(std::ostream& os, const Dataset& data,
                       const std::vector<bool>* calibration = nullptr);

/// 64-bit FNV-1a over the CSV serialization; used to pin replicate inputs.
std::uint64_t dataset_hash(const Dataset& data);

/// printf-style %.12g.
std::string format_number(double v);

}  // namespace mrepp
