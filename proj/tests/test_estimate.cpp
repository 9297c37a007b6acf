#include <cmath>

#include "density.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "estimate.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace hawkes;

TEST_SUITE_BEGIN("estimate");

TEST_CASE("second order cumulant is the sample covariance") {
  std::vector<double> x{1.0, 2.0, 4.0, 3.0, 5.0, 2.5, 0.5, 3.5};
  std::vector<double> y{0.4, 1.1, 2.2, 1.8, 2.9, 1.4, 0.2, 2.1};
  while (x.size() < 32) {  // pad to the minimum sample count
    x.push_back(x[x.size() % 8]);
    y.push_back(y[y.size() % 8]);
  }
  const auto est = joint_cumulant({x, y});
  double mx = 0, my = 0, mxy = 0;
  for (size_t t = 0; t < x.size(); ++t) {
    mx += x[t];
    my += y[t];
    mxy += x[t] * y[t];
  }
  const auto n = static_cast<double>(x.size());
  const double cov = mxy / n - (mx / n) * (my / n);
  CHECK(est.value == doctest::Approx(cov).epsilon(1e-12));
  CHECK(est.method == "jackknife");
}

TEST_CASE("constant sequences have zero higher cumulants") {
  const std::vector<double> c(40, 3.7);
  for (int n = 2; n <= 4; ++n) {
    std::vector<std::vector<double>> samples(static_cast<size_t>(n), c);
    const auto est = joint_cumulant(samples);
    CHECK(std::fabs(est.value) <= 1e-12);
    CHECK(est.std_error <= 1e-12);
  }
}

TEST_CASE("iid poisson draws have all cumulants equal to the mean") {
  RngStream rng(2024, 0x50);
  std::vector<double> draws(6000);
  for (double& v : draws) v = static_cast<double>(rng.poisson(3.0));
  const auto est = joint_cumulant({draws, draws, draws});
  CHECK(std::fabs(est.value - 3.0) <= 3.0 * est.std_error);
  CHECK(est.std_error > 0.0);
}

TEST_CASE("moment and cumulant formulas invert each other exactly") {
  RngStream rng(5, 0x51);
  const int n = 5;
  std::vector<std::vector<double>> samples(n);
  for (auto& s : samples) {
    s.resize(64);
    for (double& v : s) v = rng.uniform() * 3.0 - 1.0;
  }
  const auto moments = subset_moments(samples);
  std::vector<double> cums(moments.size(), 0.0);
  for (int mask = 1; mask < static_cast<int>(moments.size()); ++mask)
    cums[mask] = cumulant_of(mask, moments);
  for (int mask = 1; mask < static_cast<int>(moments.size()); ++mask) {
    const double rebuilt = moment_of(mask, cums);
    CHECK(test::close_rel(rebuilt, moments[mask], 1e-12));
  }
}

TEST_CASE("size and window guards") {
  std::vector<std::vector<double>> seven(7, std::vector<double>(40, 1.0));
  CHECK_THROWS_AS(joint_cumulant(seven), Error);
  std::vector<std::vector<double>> tiny(2, std::vector<double>(10, 1.0));
  try {
    joint_cumulant(tiny);
    FAIL("expected window error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
}

TEST_CASE("poisson stream: integrated estimate and flat density") {
  const auto model = test::poisson_model({1.2});
  const auto stream = simulate_clusters(model, 2e4, 31);
  const auto est = empirical_integrated_cumulant(stream, {1, 1}, 20.0, 0.0);
  CHECK(std::fabs(est.value - 1.2) <= 3.0 * est.std_error);

  LagGrid grid{0.25, 0.5, 10};
  const auto dens = covariance_density_estimate(stream, 1, 1, grid, 6.0);
  for (const auto& e : dens) CHECK(std::fabs(e.value) <= 3.0 * std::max(e.std_error, 1e-6));
}

TEST_CASE("scalar stream: integrated cumulants match the tree formulas") {
  const auto model = test::scalar_model();
  const auto stream = simulate_clusters(model, 5e4, 37);
  const double margin = model.correlation_horizon();
  const auto k2 = empirical_integrated_cumulant(stream, {1, 1}, 100.0, margin);
  CHECK(std::fabs(k2.value - 8.0) <= 3.0 * k2.std_error);
  const auto k3 = empirical_integrated_cumulant(stream, {1, 1, 1}, 100.0, margin);
  CHECK(std::fabs(k3.value - 64.0) <= 3.0 * k3.std_error);
}

namespace {

// Simpson average of the analytic density over a lag bin, which is what a
// histogram bin estimates.
double bin_avg(const DensityEvaluator& ev, double lo, double hi) {
  const double a = ev.eval({0.0, lo}).continuous;
  const double m = ev.eval({0.0, 0.5 * (lo + hi)}).continuous;
  const double b = ev.eval({0.0, hi}).continuous;
  return (a + 4.0 * m + b) / 6.0;
}

}  // namespace

TEST_CASE("covariance density estimate tracks the analytic density") {
  const auto model = test::scalar_model();
  const auto s = build_summary(model);
  const auto renewal = renewal_density(model, 0.01, 30.0);
  DensityEvaluator analytic(s, renewal, {1, 1});

  const auto stream = simulate_clusters(model, 5e4, 41);
  LagGrid grid{0.0, 0.5, 12};
  const double margin = std::max(model.correlation_horizon(), grid.hi());
  const auto est = covariance_density_estimate(stream, 1, 1, grid, margin);
  for (int b = 0; b < grid.bins; ++b) {
    const double k = bin_avg(analytic, grid.lo + b * grid.step, grid.lo + (b + 1) * grid.step);
    CHECK(std::fabs(est[static_cast<size_t>(b)].value - k) <=
          3.0 * est[static_cast<size_t>(b)].std_error);
  }

  // pair symmetry: (j, i, -tau) mirrors (i, j, tau)
  LagGrid mirrored{-grid.hi(), grid.step, grid.bins};
  const auto rev = covariance_density_estimate(stream, 1, 1, mirrored, margin);
  for (int b = 0; b < grid.bins; ++b) {
    const auto& fwd = est[static_cast<size_t>(b)];
    const auto& bwd = rev[static_cast<size_t>(grid.bins - 1 - b)];
    CHECK(std::fabs(fwd.value - bwd.value) <= fwd.std_error + bwd.std_error);
  }
}

TEST_CASE("same-cluster coincidence equals the cumulant density") {
  const auto model = test::scalar_model();
  const auto s = build_summary(model);
  const auto renewal = renewal_density(model, 0.01, 30.0);
  DensityEvaluator analytic(s, renewal, {1, 1});

  const auto stream = simulate_clusters(model, 5e4, 43);
  LagGrid grid{0.25, 0.5, 10};
  const double margin = std::max(model.correlation_horizon(), grid.hi());
  const auto same = same_cluster_density2(stream, 1, 1, grid, margin);
  for (int b = 0; b < grid.bins; ++b) {
    const double k = bin_avg(analytic, grid.lo + b * grid.step, grid.lo + (b + 1) * grid.step);
    CHECK(std::fabs(same[static_cast<size_t>(b)].value - k) <=
          3.0 * same[static_cast<size_t>(b)].std_error);
  }

  // cross-cluster pairs carry the independent-rate product
  double lam_hat = 0.0;
  const double t_lo = margin, t_hi = 5e4 - margin;
  for (const Event& e : stream.events)
    if (e.time >= t_lo && e.time < t_hi) lam_hat += 1.0;
  lam_hat /= t_hi - t_lo;
  const auto different = different_cluster_density2(stream, 1, 1, grid, margin);
  for (const auto& est : different)
    CHECK(std::fabs(est.value - lam_hat * lam_hat) <= 3.0 * est.std_error);
}

TEST_CASE("coincidence estimators demand lineage") {
  const auto stream = simulate_thinning(test::scalar_model(), 500.0, 3);
  LagGrid grid{0.0, 0.5, 4};
  try {
    same_cluster_density2(stream, 1, 1, grid, 15.0);
    FAIL("expected lineage error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::lineage);
  }
}

TEST_CASE("margin must cover the lag reach") {
  const auto stream = simulate_clusters(test::scalar_model(), 1000.0, 3);
  LagGrid grid{0.0, 1.0, 10};
  CHECK_THROWS_AS(covariance_density_estimate(stream, 1, 1, grid, 2.0), Error);
}

TEST_CASE("standard errors shrink with the observation horizon") {
  const auto model = test::scalar_model();
  const double margin = model.correlation_horizon();
  const auto short_run = simulate_clusters(model, 1e4, 51);
  const auto long_run = simulate_clusters(model, 4e4, 51);
  const auto a = empirical_integrated_cumulant(short_run, {1, 1}, 50.0, margin);
  const auto b = empirical_integrated_cumulant(long_run, {1, 1}, 50.0, margin);
  CHECK(b.std_error < a.std_error);
}

TEST_SUITE_END();
