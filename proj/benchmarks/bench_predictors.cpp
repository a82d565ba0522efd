#include <random>

#include <benchmark/benchmark.h>

#include "mrepp/ensemble.hpp"
#include "mrepp/gp_exact.hpp"
#include "mrepp/harness/config.hpp"
#include "mrepp/pp.hpp"
#include "mrepp/support_points.hpp"

namespace {

using namespace mrepp;
using harness::inducing_count;
using harness::resolution_count;
using harness::smoothness_gamma;

const KernelParams kParams{1.5, 0.21, 1.5, 0.25};

struct Data {
  LocationList locs;
  Eigen::VectorXd y;
  LocationList targets;
};

Data make_data(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::normal_distribution<double> z;
  Data d;
  d.locs.resize(n);
  for (auto& p : d.locs) p = {u(rng), u(rng)};
  d.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y(i) = z(rng);
  d.targets.resize(200);
  for (auto& p : d.targets) p = {u(rng), u(rng)};
  return d;
}

void BM_GPFitPredict(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(GPFit::fit(d.locs, d.y, kParams).predict(d.targets));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GPFitPredict)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SupportPoints(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(support_points(d.locs, 30, {100, 1e-6, 1}));
  }
}
BENCHMARK(BM_SupportPoints)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PPFitPredict(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  const auto inducing = support_points(d.locs, static_cast<std::size_t>(state.range(1)), {100, 1e-6, 1}).points;
  for (auto _ : state) {
    benchmark::DoNotOptimize(PPModel::fit(d.locs, d.y, inducing, kParams).predict(d.targets));
  }
}
BENCHMARK(BM_PPFitPredict)->Args({1000, 50})->Args({4000, 50})->Args({4000, 200})->Unit(benchmark::kMillisecond);

void BM_EPPFitPredict(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto d = make_data(n);
  const std::size_t K = resolution_count(n, 0.5);
  const std::size_t m = inducing_count(n, K, smoothness_gamma(kParams.nu));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EPPModel::fit(d.locs, d.y, K, m, Overlap{}, kParams, {100, 1e-6, 1}).predict(d.targets));
  }
}
BENCHMARK(BM_EPPFitPredict)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
