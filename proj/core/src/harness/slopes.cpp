#include "mrepp/harness/slopes.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "mrepp/errors.hpp"

namespace mrepp::harness {

SlopeResult fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs >= 2 paired points");
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("slope fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    mx += lx.back() / k;
    my += ly.back() / k;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("slope fit needs distinct x values");
  SlopeResult out;
  out.slope = sxy / sxx;
  out.n_points = x.size();
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - my - out.slope * (lx[i] - mx);
      ssr += e * e;
    }
    out.std_error = std::sqrt(ssr / (k - 2.0) / sxx);
  } else {
    out.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

SlopeResult slope_diagnostic(const std::vector<MethodResult>& rows, const std::string& method) {
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& r : rows) {
    if (r.method == method && r.status == "ok" && std::isfinite(r.latent_mse)) {
      by_n[r.n].push_back(r.latent_mse);
    }
  }
  std::vector<double> xs, ys;
  for (const auto& [n, mses] : by_n) {
    if (mses.size() < 5) continue;
    double mean = 0.0;
    for (double v : mses) mean += v / static_cast<double>(mses.size());
    xs.push_back(static_cast<double>(n));
    ys.push_back(mean);
  }
  if (xs.size() < 3) {
    throw InputError("slope diagnostic for " + method +
                     " needs >= 3 sample sizes with >= 5 successful replicates");
  }
  SlopeResult out = fit_loglog_slope(xs, ys);
  out.method = method;
  return out;
}

SlopeRun run_slopes(const ExperimentConfig& cfg) {
  if (cfg.n_grid.empty()) throw ConfigError("slopes need a non-empty n_grid");
  SlopeRun out;
  for (std::size_t n : cfg.n_grid) {
    ExperimentConfig at = cfg;
    at.scenario.n = n;
    auto run = run_experiment(at);
    out.rows.insert(out.rows.end(), run.rows.begin(), run.rows.end());
  }
  for (const auto& spec : cfg.methods) {
    out.slopes.push_back(slope_diagnostic(out.rows, method_label(spec)));
  }
  return out;
}

void write_slopes_csv(std::ostream& os, const std::vector<SlopeResult>& slopes) {
  os << "method,slope,std_error,n_points\n";
  for (const auto& s : slopes) {
    os << s.method << ',' << format_number(s.slope) << ',' << format_number(s.std_error) << ','
       << s.n_points << '\n';
  }
}

}  // namespace mrepp::harness
