#include "mrepp/support_points.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "mrepp/errors.hpp"
#include "mrepp/rng.hpp"

namespace mrepp {
namespace {

constexpr double kSingular = 1e-12;
constexpr double kMonotoneSlack = 1e-12;
constexpr int kMaxBacktracks = 30;
// Energies this small relative to the sample term are rounding residue.
constexpr double kZeroEnergy = 1e-13;

double sample_self_term(std::span<const Location> sample) {
  const std::size_t n = sample.size();
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) sum += distance(sample[a], sample[b]);
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n));
}

// One sweep over the candidates: returns the candidate-dependent part of the
// energy and writes the majorization update into `next`.
double sweep(std::span<const Location> sample, const LocationList& current, LocationList& next) {
  const std::size_t n = sample.size();
  const std::size_t m = current.size();
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double repulsion_scale = nd / md;

  double cross_sum = 0.0;
  double self_sum = 0.0;
  next.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Location si = current[i];
    double num_x = 0.0, num_y = 0.0, den = 0.0;
    bool singular = false;
    for (const Location& x : sample) {
      const double r = distance(x, si);
      cross_sum += r;
      if (r < kSingular) {
        singular = true;
        continue;
      }
      const double w = 1.0 / r;
      num_x += w * x.x;
      num_y += w * x.y;
      den += w;
    }
    double rep_x = 0.0, rep_y = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = distance(si, current[j]);
      self_sum += d;
      if (d < kSingular) continue;
      rep_x += (si.x - current[j].x) / d;
      rep_y += (si.y - current[j].y) / d;
    }
    if (den <= 0.0) {
      next[i] = si;
      continue;
    }
    Location update{(repulsion_scale * rep_x + num_x) / den,
                    (repulsion_scale * rep_y + num_y) / den};
    if (singular) {
      // The point sits on a sample point: the singular term is skipped and
      // the move is halved.
      update = {0.5 * (si.x + update.x), 0.5 * (si.y + update.y)};
    }
    next[i] = update;
  }
  return 2.0 * cross_sum / (md * nd) - self_sum / (md * md);
}

}  // namespace

void SPSolverConfig::validate() const {
  if (max_iters < 1) throw ConfigError("support points: max_iters must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("support points: tol must be > 0");
}

double energy_distance(std::span<const Location> sample, std::span<const Location> candidates) {
  if (sample.empty() || candidates.empty()) {
    throw InputError("energy_distance: both point sets must be nonempty");
  }
  const double nd = static_cast<double>(sample.size());
  const double md = static_cast<double>(candidates.size());
  double cross = 0.0;
  for (const auto& s : candidates) {
    for (const auto& x : sample) cross += distance(x, s);
  }
  double self = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      self += distance(candidates[i], candidates[j]);
    }
  }
  const double e = 2.0 * cross / (md * nd) - sample_self_term(sample) - 2.0 * self / (md * md);
  return std::max(e, 0.0);
}

SupportPointsResult support_points(std::span<const Location> sample, std::size_t m,
                                   const SPSolverConfig& cfg) {
  cfg.validate();
  if (m == 0) throw InputError("support_points: m must be >= 1");
  if (m > sample.size()) {
    throw InputError("support_points: m = " + std::to_string(m) + " exceeds the sample size " +
                     std::to_string(sample.size()));
  }
  // Partial Fisher-Yates: m distinct indices.
  std::vector<std::size_t> idx(sample.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng = make_rng(cfg.seed, Stream::kSupportPoints);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  LocationList init(m);
  for (std::size_t i = 0; i < m; ++i) init[i] = sample[idx[i]];
  return support_points_from(sample, std::move(init), cfg);
}

SupportPointsResult support_points_from(std::span<const Location> sample, LocationList init,
                                        const SPSolverConfig& cfg) {
  cfg.validate();
  if (sample.empty() || init.empty()) {
    throw InputError("support_points: sample and initialization must be nonempty");
  }
  const double constant = sample_self_term(sample);
  auto total = [constant](double variable) { return std::max(variable - constant, 0.0); };

  SupportPointsResult out;
  LocationList current = std::move(init);
  LocationList proposal;
  LocationList scratch;
  double energy = total(sweep(sample, current, proposal));
  out.energy_trace.push_back(energy);
  if (energy <= kZeroEnergy * constant) {
    out.points = std::move(current);
    return out;
  }

  for (int it = 0; it < cfg.max_iters; ++it) {
    LocationList candidate = proposal;
    double cand_energy = total(sweep(sample, candidate, scratch));
    int backtracks = 0;
    while (cand_energy > energy + kMonotoneSlack * std::max(1.0, energy) &&
           backtracks < kMaxBacktracks) {
      for (std::size_t i = 0; i < candidate.size(); ++i) {
        candidate[i] = {0.5 * (candidate[i].x + current[i].x),
                        0.5 * (candidate[i].y + current[i].y)};
      }
      cand_energy = total(sweep(sample, candidate, scratch));
      ++backtracks;
    }
    if (cand_energy > energy + kMonotoneSlack * std::max(1.0, energy)) break;

    const double change = std::abs(energy - cand_energy);
    current = std::move(candidate);
    proposal.swap(scratch);
    out.iterations = it + 1;
    out.energy_trace.push_back(cand_energy);
    const double previous = energy;
    energy = cand_energy;
    if (previous <= 0.0 || change < cfg.tol * previous) break;
  }
  out.points = std::move(current);
  return out;
}

}  // namespace mrepp
