#include "mrepp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrepp/errors.hpp"
#include "mrepp/rng.hpp"

namespace mrepp {
namespace {

constexpr double kCoincidentSites = 1e-14;

nlohmann::ordered_json location_json(const Location& s) { return nlohmann::ordered_json::array({s.x, s.y}); }

}  // namespace

double median_site_distance(std::span<const Location> sites) {
  std::vector<double> d;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) d.push_back(distance(sites[i], sites[j]));
  }
  if (d.empty()) return 0.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  if (d.size() % 2 == 1) return d[mid];
  const double upper = d[mid];
  const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double Overlap::resolve(std::span<const Location> sites) const {
  if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigError("overlap must be >= 0");
  return relative ? value * median_site_distance(sites) : value;
}

Partition Partition::build_spvt(std::span<const Location> locations, std::size_t K, std::size_t m,
                                Overlap overlap, const SPSolverConfig& cfg) {
  if (K == 0) throw InputError("build_spvt: K must be >= 1");
  if (m == 0) throw InputError("build_spvt: m must be >= 1");
  if (K > locations.size()) {
    throw BuildError("build_spvt: K = " + std::to_string(K) + " exceeds the number of locations");
  }
  auto sites = support_points(locations, K, cfg).points;
  return from_sites(locations, std::move(sites), m, overlap, cfg);
}

Partition Partition::from_sites(std::span<const Location> locations, LocationList sites,
                                std::size_t m, Overlap overlap, const SPSolverConfig& cfg) {
  if (sites.empty()) throw InputError("partition: at least one site is required");
  if (m == 0) throw InputError("partition: m must be >= 1");

  Partition p;
  p.delta_ = overlap.resolve(sites);
  p.sites_ = std::move(sites);
  const std::size_t K = p.sites_.size();
  p.regions_.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    p.regions_[k].index = k;
    p.regions_[k].site = p.sites_[k];
    p.regions_[k].delta = p.delta_;
  }
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (std::size_t k : p.membership(locations[i])) p.regions_[k].members.push_back(i);
  }
  for (auto& region : p.regions_) {
    if (region.members.empty()) {
      throw BuildError("partition: region " + std::to_string(region.index) +
                       " has no members; use a smaller K");
    }
    LocationList local;
    local.reserve(region.members.size());
    for (std::size_t i : region.members) local.push_back(locations[i]);
    const std::size_t count = std::min(m, std::max<std::size_t>(1, local.size() / 2));
    SPSolverConfig local_cfg = cfg;
    local_cfg.seed = derive_seed(cfg.seed, Stream::kSupportPoints, region.index + 1);
    region.inducing = support_points(local, count, local_cfg).points;
  }
  return p;
}

std::size_t Partition::nearest_site(const Location& s) const {
  std::size_t best = 0;
  double best_d2 = squared_distance(s, sites_[0]);
  for (std::size_t k = 1; k < sites_.size(); ++k) {
    const double d2 = squared_distance(s, sites_[k]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
    }
  }
  return best;
}

double Partition::signed_bisector_distance(std::size_t k, std::size_t j, const Location& s) const {
  const Location& uk = sites_.at(k);
  const Location& uj = sites_.at(j);
  const double sep = distance(uk, uj);
  return (squared_distance(s, uj) - squared_distance(s, uk)) / (2.0 * sep);
}

double Partition::boundary_slack(std::size_t k, const Location& s) const {
  double slack = kNoBoundary;
  for (std::size_t j = 0; j < sites_.size(); ++j) {
    if (j == k || distance(sites_[k], sites_[j]) < kCoincidentSites) continue;
    slack = std::min(slack, signed_bisector_distance(k, j, s) + delta_);
  }
  return slack;
}

bool Partition::contains(std::size_t k, const Location& s) const {
  if (k >= sites_.size()) return false;
  if (nearest_site(s) == k) return true;
  if (delta_ == 0.0) return false;
  return boundary_slack(k, s) >= 0.0;
}

std::vector<std::size_t> Partition::membership(const Location& s) const {
  std::vector<std::size_t> out;
  const std::size_t nearest = nearest_site(s);
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    if (k == nearest || (delta_ > 0.0 && boundary_slack(k, s) >= 0.0)) out.push_back(k);
  }
  return out;
}

double Partition::boundary_distance(std::size_t k, const Location& s) const {
  if (!contains(k, s)) {
    throw DomainError("boundary_distance: location is not in region " + std::to_string(k));
  }
  const double slack = boundary_slack(k, s);
  if (slack == kNoBoundary) return kNoBoundary;
  const double positive = std::max(0.0, slack);
  return positive * positive;
}

std::vector<double> Partition::horizontal_weights(const Location& s) const {
  const std::size_t K = sites_.size();
  std::vector<double> w(K, 0.0);
  if (K == 1) {
    w[0] = 1.0;
    return w;
  }
  const std::size_t nearest = nearest_site(s);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double slack = boundary_slack(k, s);
    const bool member = k == nearest || (delta_ > 0.0 && slack >= 0.0);
    if (!member) continue;
    const double bd = slack == kNoBoundary ? kNoBoundary : std::max(0.0, slack) * std::max(0.0, slack);
    double kernel = 0.0;
    if (bd == kNoBoundary) {
      kernel = 1.0;
    } else if (bd > 0.0) {
      kernel = std::exp(-squared_distance(s, sites_[k]) / bd);
    }
    w[k] = kernel;
    total += kernel;
  }
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 0.0);
    w[nearest] = 1.0;
    return w;
  }
  for (double& x : w) x /= total;
  return w;
}

double Partition::imbalance_ratio(std::size_t n) const {
  const double expected = static_cast<double>(n) / static_cast<double>(regions_.size());
  double worst = 1.0;
  for (const auto& r : regions_) {
    const double c = static_cast<double>(r.members.size());
    worst = std::max({worst, c / expected, expected / c});
  }
  return worst;
}

nlohmann::ordered_json Partition::to_json() const {
  nlohmann::ordered_json j;
  j["K"] = regions_.size();
  j["delta"] = delta_;
  j["sites"] = nlohmann::ordered_json::array();
  for (const auto& s : sites_) j["sites"].push_back(location_json(s));
  j["regions"] = nlohmann::ordered_json::array();
  for (const auto& r : regions_) {
    nlohmann::ordered_json jr;
    jr["index"] = r.index;
    jr["site"] = location_json(r.site);
    jr["inducing"] = nlohmann::ordered_json::array();
    for (const auto& u : r.inducing) jr["inducing"].push_back(location_json(u));
    jr["members"] = r.members;
    j["regions"].push_back(std::move(jr));
  }
  return j;
}

}  // namespace mrepp
