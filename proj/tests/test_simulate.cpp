#include <cmath>
#include <map>

#include "doctest.h"
#include "errors.hpp"
#include "simulate.hpp"
#include "test_util.hpp"

using namespace hawkes;

TEST_SUITE_BEGIN("simulate");

namespace {

double interior_rate(const EventStream& s, int type, double lo, double hi) {
  long long n = 0;
  for (const Event& e : s.events)
    if (e.type == type && e.time >= lo && e.time < hi) ++n;
  return static_cast<double>(n) / (hi - lo);
}

void check_lineage(const EventStream& s) {
  for (size_t r = 0; r < s.events.size(); ++r) {
    const Event& e = s.events[r];
    if (e.generation == 0) {
      CHECK(e.parent == -1);
    } else {
      REQUIRE(e.parent >= 0);
      REQUIRE(e.parent < static_cast<long long>(s.events.size()));
      const Event& p = s.events[static_cast<size_t>(e.parent)];
      CHECK(p.time < e.time);
      CHECK(p.generation == e.generation - 1);
      CHECK(p.cluster_id == e.cluster_id);
    }
  }
}

}  // namespace

TEST_CASE("poisson model produces immigrants only at the base rate") {
  const auto model = test::poisson_model({1.0, 0.5});
  const auto s = simulate_clusters(model, 5000.0, 42);
  CHECK(s.has_lineage);
  CHECK(s.burn_in == 0.0);
  for (const Event& e : s.events) {
    CHECK(e.generation == 0);
    CHECK(e.parent == -1);
  }
  // rate se for a Poisson count is sqrt(mu / T)
  CHECK(std::fabs(interior_rate(s, 1, 0.0, 5000.0) - 1.0) <= 3.0 * std::sqrt(1.0 / 5000.0));
  CHECK(std::fabs(interior_rate(s, 2, 0.0, 5000.0) - 0.5) <= 3.0 * std::sqrt(0.5 / 5000.0));
}

TEST_CASE("scalar model reaches its stationary rate") {
  const auto model = test::scalar_model();
  const double t_obs = 1e4;
  const auto s = simulate_clusters(model, t_obs, 7);
  check_lineage(s);
  // count variance over [0, T] is the integrated covariance times T
  const double se = std::sqrt(8.0 / t_obs);
  CHECK(std::fabs(interior_rate(s, 1, 0.0, t_obs) - 2.0) <= 3.0 * se);
}

TEST_CASE("offspring counts estimate the branching matrix") {
  const auto model = test::asymmetric2_model();
  const auto summary = build_summary(model);
  const double t_obs = 2e4;
  const auto s = simulate_clusters(model, t_obs, 11);
  const double horizon = model.correlation_horizon();

  // children of interior parents, grouped by (child type, parent type)
  std::vector<long long> parents(3, 0);
  std::map<std::pair<int, int>, long long> children;
  for (const Event& e : s.events) {
    if (e.time < 0.0 || e.time > t_obs - horizon) continue;
    if (e.type >= 1) ++parents[static_cast<size_t>(e.type)];
  }
  for (const Event& e : s.events) {
    if (e.parent < 0) continue;
    const Event& p = s.events[static_cast<size_t>(e.parent)];
    if (p.time < 0.0 || p.time > t_obs - horizon) continue;
    ++children[{e.type, p.type}];
  }
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      const double n_parents = static_cast<double>(parents[static_cast<size_t>(j)]);
      const double mean = static_cast<double>(children[{i, j}]) / n_parents;
      const double alpha = summary.gbar(i - 1, j - 1);
      const double se = std::sqrt(std::max(alpha, 1e-3) / n_parents);
      CHECK(std::fabs(mean - alpha) <= 3.0 * se);
    }
}

TEST_CASE("streams are reproducible and thread-count independent") {
  const auto model = test::scalar_model();
  SimOptions serial;
  serial.threads = 1;
  SimOptions parallel;
  parallel.threads = 4;
  const auto a = simulate_clusters(model, 3000.0, 99, serial);
  const auto b = simulate_clusters(model, 3000.0, 99, parallel);
  REQUIRE(a.events.size() == b.events.size());
  for (size_t r = 0; r < a.events.size(); ++r) {
    CHECK(a.events[r].time == b.events[r].time);
    CHECK(a.events[r].type == b.events[r].type);
    CHECK(a.events[r].cluster_id == b.events[r].cluster_id);
    CHECK(a.events[r].parent == b.events[r].parent);
    CHECK(a.events[r].generation == b.events[r].generation);
  }
  const auto c = simulate_clusters(model, 3000.0, 100, serial);
  CHECK(c.events.size() != a.events.size());  // different seed, different stream
}

TEST_CASE("events arrive sorted with deterministic tie-breaking") {
  const auto s = simulate_clusters(test::asymmetric2_model(), 2000.0, 3);
  for (size_t r = 1; r < s.events.size(); ++r)
    CHECK(s.events[r - 1].time <= s.events[r].time);
}

TEST_CASE("doubling the burn-in barely moves windowed rates") {
  const auto model = test::scalar_model();
  const double t_obs = 5000.0;
  SimOptions base;  // default burn-in = 20 max(1/beta)/(1-rho) = 80
  SimOptions twice;
  twice.burn_in = 2.0 * default_burn_in(model);
  const auto a = simulate_clusters(model, t_obs, 21, base);
  const auto b = simulate_clusters(model, t_obs, 21, twice);
  const double se = std::sqrt(8.0 / t_obs);
  const double ra = interior_rate(a, 1, 0.0, t_obs);
  const double rb = interior_rate(b, 1, 0.0, t_obs);
  CHECK(std::fabs(ra - rb) < se);
}

TEST_CASE("cluster event cap guards near-critical explosions") {
  SimOptions opts;
  opts.cluster_event_cap = 2;
  try {
    simulate_clusters(test::scalar_model(), 200.0, 5, opts);
    FAIL("expected explosion guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::explosion);
  }
}

TEST_CASE("thinning sampler hits the stationary rate without lineage") {
  const auto model = test::scalar_model();
  const double t_obs = 1e4;
  const auto s = simulate_thinning(model, t_obs, 17);
  CHECK_FALSE(s.has_lineage);
  for (const Event& e : s.events) {
    CHECK(e.parent == -2);
    CHECK(e.cluster_id == -1);
    CHECK(e.generation == -1);
  }
  const double se = std::sqrt(8.0 / t_obs);
  CHECK(std::fabs(interior_rate(s, 1, 0.0, t_obs) - 2.0) <= 3.0 * se);

  const auto poisson = simulate_thinning(test::poisson_model({1.5}), 5000.0, 19);
  CHECK(std::fabs(interior_rate(poisson, 1, 0.0, 5000.0) - 1.5) <=
        3.0 * std::sqrt(1.5 / 5000.0));
}

TEST_CASE("thinning handles grid kernels through the envelope bound") {
  // triangular bump kernel with mass 0.45
  std::vector<double> vals{0.0, 0.6, 0.3, 0.0};
  const HawkesModel model({1.0}, {Kernel::grid(1.0, std::move(vals))});
  const auto s = build_summary(model);
  const double t_obs = 8000.0;
  const auto stream = simulate_thinning(model, t_obs, 23);
  const double k11 = s.lambda[0] * s.resolvent(0, 0) * s.resolvent(0, 0);
  const double se = std::sqrt(k11 / t_obs);
  CHECK(std::fabs(interior_rate(stream, 1, 0.0, t_obs) - s.lambda[0]) <= 3.0 * se);
}

TEST_SUITE_END();
