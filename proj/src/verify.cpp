#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cumulants.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "json.hpp"
#include "simulate.hpp"

namespace hawkes {

namespace {

VerifyCheck make_check(std::string name, double analytic, double empirical, double se) {
  VerifyCheck c;
  c.name = std::move(name);
  c.analytic = analytic;
  c.empirical = empirical;
  c.std_error = se;
  c.pass = std::fabs(empirical - analytic) <= 3.0 * std::max(se, 1e-12);
  return c;
}

}  // namespace

VerificationReport run_verify(const HawkesModel& model, const VerifyOptions& opts) {
  require(opts.t_obs > 0.0, ErrorCode::invalid_argument, "t_obs must be positive");
  const int d = model.dim();
  const auto summary = build_summary(model);
  const auto stream = simulate_clusters(model, opts.t_obs, opts.seed);

  VerificationReport report;
  report.t_obs = opts.t_obs;
  report.seed = opts.seed;

  const double horizon = std::max(model.correlation_horizon(), 1.0);
  const double margin = horizon;
  const double t_lo = margin, t_hi = opts.t_obs - margin;
  require(t_hi - t_lo > 10.0 * horizon, ErrorCode::window,
          "observation horizon too short for verification");
  const double t_eff = t_hi - t_lo;

  // stationary rates; the count variance over the window is the integrated
  // covariance times the window length
  const Mat k2 = integrated_covariance(summary);
  std::vector<long long> type_counts(static_cast<size_t>(d), 0);
  for (const Event& e : stream.events)
    if (e.time >= t_lo && e.time < t_hi) ++type_counts[static_cast<size_t>(e.type - 1)];
  for (int i = 0; i < d; ++i) {
    const double rate = static_cast<double>(type_counts[static_cast<size_t>(i)]) / t_eff;
    const double se = std::sqrt(k2(i, i) / t_eff);
    report.checks.push_back(
        make_check("rate[" + std::to_string(i + 1) + "]", summary.lambda[static_cast<size_t>(i)],
                   rate, se));
  }

  // offspring matrix from lineage
  {
    std::vector<long long> parents(static_cast<size_t>(d), 0);
    std::map<std::pair<int, int>, long long> children;
    for (const Event& e : stream.events)
      if (e.time >= t_lo && e.time < t_hi) ++parents[static_cast<size_t>(e.type - 1)];
    for (const Event& e : stream.events) {
      if (e.parent < 0) continue;
      const Event& p = stream.events[static_cast<size_t>(e.parent)];
      if (p.time < t_lo || p.time >= t_hi) continue;
      ++children[{e.type, p.type}];
    }
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) {
        const double n_par = std::max<double>(1.0, static_cast<double>(parents[static_cast<size_t>(j - 1)]));
        const double mean = static_cast<double>(children[{i, j}]) / n_par;
        const double g = summary.gbar(i - 1, j - 1);
        const double se = std::sqrt(std::max(g, 1e-4) / n_par);
        report.checks.push_back(make_check(
            "offspring[" + std::to_string(i) + "," + std::to_string(j) + "]", g, mean, se));
      }
  }

  // integrated cumulants of orders 2 and 3 from bin counts; the window is
  // sized against the correlation time, not the bare kernel scale
  const double scale = std::max(model.max_timescale(), 0.5);
  const double bin_width =
      opts.bin_width > 0.0 ? opts.bin_width : 20.0 * scale / (1.0 - summary.rho);
  for (int i = 1; i <= d; ++i)
    for (int j = i; j <= d; ++j) {
      const auto est = empirical_integrated_cumulant(stream, {i, j}, bin_width, margin);
      report.checks.push_back(make_check(
          "k2[" + std::to_string(i) + "," + std::to_string(j) + "]", k2(i - 1, j - 1), est.value,
          est.std_error));
    }
  const auto k3 = integrated_third(summary);
  for (int i = 1; i <= d; ++i) {
    const auto est = empirical_integrated_cumulant(stream, {i, i, i}, bin_width, margin);
    const double analytic = k3[((static_cast<size_t>(i - 1) * d) + (i - 1)) * d + (i - 1)];
    report.checks.push_back(
        make_check("k3[" + std::to_string(i) + "," + std::to_string(i) + "," + std::to_string(i) +
                       "]",
                   analytic, est.value, est.std_error));
  }

  // covariance density and the same-cluster coincidence identity at lags
  {
    const double dt = default_renewal_dt(model);
    const double hor = default_renewal_horizon(model);
    const auto renewal = renewal_density(model, dt, hor);
    DensityEvaluator analytic(summary, renewal, {1, 1});
    LagGrid grid{opts.lag_step * 0.5, opts.lag_step, opts.lag_bins};
    const double density_margin = std::max(margin, grid.hi());
    const auto cov = covariance_density_estimate(stream, 1, 1, grid, density_margin);
    const auto same = same_cluster_density2(stream, 1, 1, grid, density_margin);
    for (int b = 0; b < grid.bins; ++b) {
      const double lo = grid.lo + b * grid.step;
      const double hi = lo + grid.step;
      const double mid = analytic.eval({0.0, 0.5 * (lo + hi)}).continuous;
      const double avg = (analytic.eval({0.0, lo}).continuous + 4.0 * mid +
                          analytic.eval({0.0, hi}).continuous) /
                         6.0;
      char buf[64];
      std::snprintf(buf, sizeof buf, "cov_density[1,1](%.3g)", grid.center(b));
      report.checks.push_back(
          make_check(buf, avg, cov[static_cast<size_t>(b)].value, cov[static_cast<size_t>(b)].std_error));
      std::snprintf(buf, sizeof buf, "same_cluster[1,1](%.3g)", grid.center(b));
      report.checks.push_back(make_check(buf, avg, same[static_cast<size_t>(b)].value,
                                         same[static_cast<size_t>(b)].std_error));
    }
  }

  // window-robustness diagnostic for the first diagonal cumulant
  for (double w : {0.5 * bin_width, bin_width, 2.0 * bin_width}) {
    const double span = opts.t_obs - 2.0 * margin;
    if (span / w < 30.0) continue;
    const auto est = empirical_integrated_cumulant(stream, {1, 1}, w, margin);
    report.w_sweep.push_back({w, est.value, est.std_error});
  }

  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const VerifyCheck& c) { return c.pass; });
  return report;
}

std::string report_to_json(const VerificationReport& report) {
  nlohmann::json doc;
  doc["t_obs"] = report.t_obs;
  doc["seed"] = report.seed;
  doc["all_pass"] = report.all_pass;
  nlohmann::json checks = nlohmann::json::array();
  for (const VerifyCheck& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"analytic", c.analytic},
                      {"empirical", c.empirical},
                      {"std_error", c.std_error},
                      {"pass", c.pass}});
  doc["checks"] = std::move(checks);
  nlohmann::json sweep = nlohmann::json::array();
  for (const WSweepPoint& p : report.w_sweep)
    sweep.push_back({{"bin_width", p.bin_width}, {"value", p.value}, {"std_error", p.std_error}});
  doc["w_sweep"] = std::move(sweep);
  return doc.dump(2);
}

}  // namespace hawkes
