#include "mrepp/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mrepp/errors.hpp"
#include "mrepp/gp_exact.hpp"
#include "mrepp/rng.hpp"

namespace mrepp {
namespace {

constexpr double kFixedHalfSide = 3.0;
constexpr int kThinningRetries = 20000;

LocationList uniform_square(std::size_t count, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  LocationList out(count);
  for (auto& s : out) {
    s.x = u(rng);
    s.y = u(rng);
  }
  return out;
}

// Random sequential addition with a uniform grid of cell size min_dist.
LocationList poisson_disk(std::size_t count, double side, double min_dist, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, side);
  const double cell = min_dist;
  const auto cells = static_cast<long long>(std::ceil(side / cell)) + 1;
  std::unordered_map<long long, std::vector<std::size_t>> grid;
  auto key = [cells](long long cx, long long cy) { return cx * cells + cy; };
  const double min_d2 = min_dist * min_dist;

  LocationList out;
  out.reserve(count);
  while (out.size() < count) {
    bool placed = false;
    for (int attempt = 0; attempt < kThinningRetries && !placed; ++attempt) {
      const Location s{u(rng), u(rng)};
      const auto cx = static_cast<long long>(s.x / cell);
      const auto cy = static_cast<long long>(s.y / cell);
      bool ok = true;
      for (long long dx = -1; dx <= 1 && ok; ++dx) {
        for (long long dy = -1; dy <= 1 && ok; ++dy) {
          auto it = grid.find(key(cx + dx, cy + dy));
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if (squared_distance(out[j], s) < min_d2) {
              ok = false;
              break;
            }
          }
        }
      }
      if (ok) {
        grid[key(cx, cy)].push_back(out.size());
        out.push_back(s);
        placed = true;
      }
    }
    if (!placed) {
      const double suggested = side * 1.5;
      std::ostringstream msg;
      msg << "poisson-disk thinning placed only " << out.size() << " of " << count
          << " points on a square of side " << side << "; try side >= " << suggested;
      throw DomainTooDenseError(msg.str(), suggested);
    }
  }
  return out;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::kFixedSpace:
      return "FixedSpace";
    case Scenario::kFixedRadius:
      return "FixedRadius";
    case Scenario::kContaminated:
      return "Contaminated";
  }
  return "Unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "FixedSpace") return Scenario::kFixedSpace;
  if (name == "FixedRadius") return Scenario::kFixedRadius;
  if (name == "Contaminated") return Scenario::kContaminated;
  throw ConfigError("unknown scenario '" + name + "'");
}

void ScenarioConfig::validate() const {
  params.validate();
  if (n < 10) throw ConfigError("scenario: n must be >= 10");
  if (!(contamination_fraction >= 0.0 && contamination_fraction < 0.5)) {
    throw ConfigError("scenario: contamination_fraction must lie in [0, 0.5)");
  }
  if (contamination_value && !std::isfinite(*contamination_value)) {
    throw ConfigError("scenario: contamination_value must be finite");
  }
  if (scenario == Scenario::kFixedRadius && !(r_S_target > 0.0)) {
    throw ConfigError("scenario: r_S_target must be positive");
  }
}

std::size_t ScenarioConfig::contaminated_count() const {
  if (!contamination_value) return 0;
  // Guard against 0.01 * 1000 = 10.000000000000002.
  return static_cast<std::size_t>(
      std::ceil(contamination_fraction * static_cast<double>(n) - 1e-9));
}

Dataset generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Dataset data;
  const std::size_t total = cfg.n + cfg.n_test;

  LocationList all;
  if (cfg.scenario == Scenario::kFixedRadius) {
    const double side = 2.0 * cfg.r_S_target * std::sqrt(static_cast<double>(total) / 0.5);
    Rng rng = make_rng(cfg.seed, Stream::kTrainLocations);
    all = poisson_disk(total, side, 2.0 * cfg.r_S_target, rng);
    // Late RSA insertions fill gaps; shuffle so train and test share one law.
    Rng order_rng = make_rng(cfg.seed, Stream::kTestLocations);
    std::shuffle(all.begin(), all.end(), order_rng);
    data.domain = {{0.0, 0.0}, {side, side}};
  } else {
    Rng train_rng = make_rng(cfg.seed, Stream::kTrainLocations);
    Rng test_rng = make_rng(cfg.seed, Stream::kTestLocations);
    all = uniform_square(cfg.n, -kFixedHalfSide, kFixedHalfSide, train_rng);
    const LocationList test = uniform_square(cfg.n_test, -kFixedHalfSide, kFixedHalfSide, test_rng);
    all.insert(all.end(), test.begin(), test.end());
    data.domain = {{-kFixedHalfSide, -kFixedHalfSide}, {kFixedHalfSide, kFixedHalfSide}};
  }

  const GPDraw draw = gp_draw(all, cfg.params, cfg.seed);
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto n_test = static_cast<Eigen::Index>(cfg.n_test);
  data.train_locations.assign(all.begin(), all.begin() + n);
  data.test_locations.assign(all.begin() + n, all.end());
  data.train_values = draw.observed.head(n);
  data.test_values = draw.observed.tail(n_test);
  data.test_latent = draw.latent.tail(n_test);

  const std::size_t count = cfg.contaminated_count();
  if (count > 0) {
    std::vector<std::size_t> idx(cfg.n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng = make_rng(cfg.seed, Stream::kContamination);
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    data.contaminated_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(data.contaminated_indices.begin(), data.contaminated_indices.end());
    for (std::size_t i : data.contaminated_indices) {
      data.train_values(static_cast<Eigen::Index>(i)) = *cfg.contamination_value;
    }
  }
  return data;
}

double separation_radius(std::span<const Location> locations) {
  if (locations.size() < 2) throw InputError("separation_radius: need at least 2 locations");
  // Sweep along x keeps this near O(n log n) for spread-out designs.
  LocationList sorted(locations.begin(), locations.end());
  std::sort(sorted.begin(), sorted.end(), [](const Location& a, const Location& b) { return a.x < b.x; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const double dx = sorted[j].x - sorted[i].x;
      if (dx * dx >= best) break;
      best = std::min(best, squared_distance(sorted[i], sorted[j]));
    }
  }
  return 0.5 * std::sqrt(best);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_dataset_csv(std::ostream& os, const Dataset& data, const std::vector<bool>* calibration) {
  std::vector<bool> flagged(data.train_locations.size(), false);
  for (std::size_t i : data.contaminated_indices) flagged[i] = true;
  os << "role,x,y,value,contaminated\n";
  for (std::size_t i = 0; i < data.train_locations.size(); ++i) {
    const bool calib = calibration && i < calibration->size() && (*calibration)[i];
    os << (calib ? "calib" : "train") << ',' << format_number(data.train_locations[i].x) << ','
       << format_number(data.train_locations[i].y) << ','
       << format_number(data.train_values(static_cast<Eigen::Index>(i))) << ','
       << (flagged[i] ? 1 : 0) << '\n';
  }
  for (std::size_t i = 0; i < data.test_locations.size(); ++i) {
    os << "test," << format_number(data.test_locations[i].x) << ','
       << format_number(data.test_locations[i].y) << ','
       << format_number(data.test_values(static_cast<Eigen::Index>(i))) << ",0\n";
  }
}

std::uint64_t dataset_hash(const Dataset& data) {
  std::ostringstream os;
  write_dataset_csv(os, data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mrepp
