// mrepp: experiment driver.
//
//   mrepp simulate  --config c.json [--seed S] [--out data.csv]
//   mrepp run       --config c.json [--seed S] [--out results.csv] [--jobs J]
//   mrepp influence --config c.json [--seed S] [--out audit.csv]   [--jobs J]
//   mrepp slopes    --config c.json [--seed S] [--out slopes.csv]  [--jobs J]
//
// Exit codes: 0 success, 2 config error, 3 runtime failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "mrepp/errors.hpp"
#include "mrepp/harness/audit.hpp"
#include "mrepp/harness/config.hpp"
#include "mrepp/harness/experiment.hpp"
#include "mrepp/harness/slopes.hpp"
#include "mrepp/simgen.hpp"

namespace {

using namespace mrepp;
using namespace mrepp::harness;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
};

ExperimentConfig load(const Options& opt) {
  ExperimentConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.scenario.seed = *opt.seed;
  if (opt.out) cfg.output_path = *opt.out;
  if (opt.jobs) cfg.parallel_jobs = *opt.jobs;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path + "'");
  return os;
}

int simulate(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const Dataset data = generate(cfg.scenario);
  std::optional<std::vector<bool>> mask;
  for (const auto& m : cfg.methods) {
    if (const auto* mr = std::get_if<MREPPMethod>(&m)) {
      mask = calibration_mask(data.train_locations.size(), mr->calib_fraction, cfg.scenario.seed);
      break;
    }
  }
  const std::vector<bool>* calib = mask ? &*mask : nullptr;
  if (!opt.out) {
    write_dataset_csv(std::cout, data, calib);
  } else {
    auto os = open_out(*opt.out);
    write_dataset_csv(os, data, calib);
  }
  return 0;
}

int run(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const RunOutput out = run_experiment(cfg);
  write_run_outputs(cfg.output_path, out);
  std::size_t failed = 0;
  for (const auto& row : out.rows) failed += row.status == "ok" ? 0 : 1;
  std::cerr << "wrote " << out.rows.size() << " rows to " << cfg.output_path;
  if (failed) std::cerr << " (" << failed << " failed)";
  std::cerr << '\n';
  return 0;
}

int influence(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const auto rows = influence_audit(cfg);
  const std::string path = opt.out ? *opt.out : std::string("influence.csv");
  auto os = open_out(path);
  write_audit_csv(os, rows);
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.violations;
  std::cerr << "wrote " << rows.size() << " audit rows to " << path << "; bound violations: "
            << violations << '\n';
  return 0;
}

int slopes(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const SlopeRun result = run_slopes(cfg);
  const std::string path = opt.out ? *opt.out : std::string("slopes.csv");
  auto os = open_out(path);
  write_slopes_csv(os, result.slopes);
  auto rows = open_out(path + ".rows.csv");
  write_results_csv(rows, result.rows);
  for (const auto& s : result.slopes) {
    std::cerr << s.method << ": slope " << s.slope << " (se " << s.std_error << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process spatial prediction: GP, PP, EPP and MREPP experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MREPP_VERSION));

  Options opt;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "experiment config (JSON)")->required();
    sub->add_option("--seed", opt.seed, "base seed, overrides scenario.seed");
    sub->add_option("--out", opt.out, "output path");
    sub->add_option("--jobs", opt.jobs, "parallel jobs")->check(CLI::PositiveNumber);
    return sub;
  };
  CLI::App* sim = add("simulate", "write one generated dataset as CSV");
  CLI::App* run_cmd = add("run", "fit and score every method on every replicate");
  CLI::App* infl = add("influence", "influence-function audit for GP and PP");
  CLI::App* slope = add("slopes", "convergence-slope diagnostic over n_grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return simulate(opt);
    if (run_cmd->parsed()) return run(opt);
    if (infl->parsed()) return influence(opt);
    if (slope->parsed()) return slopes(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
