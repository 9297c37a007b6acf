#include <cmath>
#include <random>

#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"
#include "test_util.hpp"

using namespace hawkes;

TEST_SUITE_BEGIN("model");

TEST_CASE("scalar summary arithmetic") {
  const auto s = build_summary(test::scalar_model());
  CHECK(s.gbar(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.rho == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.lambda[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.resolvent(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.psi(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("poisson limit: zero kernels") {
  const auto model = test::poisson_model({0.7, 1.3, 2.0});
  const auto s = build_summary(model);
  CHECK(s.rho == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.lambda[i] == model.mu()[i]);
    for (int j = 0; j < 3; ++j) {
      CHECK(s.gbar(i, j) == 0.0);
      CHECK(s.resolvent(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(s.psi(i, j) == 0.0);
    }
  }
}

TEST_CASE("nilpotent two-type model") {
  // only type 2 -> type 1 influence: R = I + G, lambda = (1.9, 1.0)
  std::vector<Kernel> kernels{Kernel::zero(), Kernel::exponential(0.9, 2.0), Kernel::zero(),
                              Kernel::zero()};
  const HawkesModel model({1.0, 1.0}, std::move(kernels));
  const auto s = build_summary(model);
  CHECK(s.rho == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(s.lambda[0] == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(s.lambda[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.resolvent(0, 1) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("spectral radius basics") {
  CHECK(spectral_radius(Mat(3, 3)) == 0.0);
  Mat half(1, 1);
  half(0, 0) = 0.5;
  CHECK(spectral_radius(half) == doctest::Approx(0.5).epsilon(1e-10));
  Mat nil(2, 2);
  nil(0, 1) = 0.9;
  CHECK(spectral_radius(nil) == doctest::Approx(0.0).epsilon(1e-10));
  // periodic irreducible structure takes the component fallback
  Mat per(2, 2);
  per(0, 1) = 2.0;
  per(1, 0) = 0.5;
  CHECK(spectral_radius(per) == doctest::Approx(1.0).epsilon(1e-8));
  // reducible with distinct block radii
  Mat red(3, 3);
  red(0, 0) = 0.3;
  red(1, 2) = 0.8;
  red(2, 1) = 0.2;
  CHECK(spectral_radius(red) == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("construction rejects unstable and degenerate input") {
  CHECK_THROWS_WITH_AS(test::scalar_model(1.0, 1.2, 1.0), doctest::Contains("criticality"),
                       Error);
  try {
    test::scalar_model(1.0, 1.0, 1.0);
    FAIL("expected stability error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::stability);
  }
  try {
    Kernel::exponential(0.5, 0.0);
    FAIL("expected degenerate error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
  try {
    HawkesModel({0.0}, {Kernel::zero()});
    FAIL("expected degenerate error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
}

TEST_CASE("resolvent equals the Neumann limit with geometric tail") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto model = test::random_exp_model(rng);
    const auto s = build_summary(model);
    // kappa bounds ||G^k|| / rho^k over the transient
    double kappa = 1.0;
    if (s.rho > 1e-9) {
      Mat p = Mat::identity(s.dim);
      for (int k = 1; k <= 60; ++k) {
        p = p * s.gbar;
        kappa = std::max(kappa, max_abs(p) / std::pow(s.rho, k));
      }
    }
    Mat partial = Mat::identity(s.dim);
    Mat power = Mat::identity(s.dim);
    for (int n = 1; n <= 30; ++n) {
      power = power * s.gbar;
      partial = partial + power;
      const double tail = max_abs(s.resolvent - partial);
      if (s.rho > 1e-9) {
        CHECK(tail <= kappa * std::pow(s.rho, n + 1) / (1.0 - s.rho) + 1e-12);
      } else {
        if (n >= s.dim) CHECK(tail <= 1e-12);
      }
    }
  }
}

TEST_CASE("stationary rate solves the fixed point equation") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto model = test::random_exp_model(rng);
    const auto s = build_summary(model);
    const auto gl = s.gbar * s.lambda;
    for (int i = 0; i < s.dim; ++i) {
      const double resid = std::fabs(s.lambda[i] - (model.mu()[i] + gl[i]));
      CHECK(resid <= 1e-10 * std::fabs(s.lambda[i]));
    }
  }
}

TEST_CASE("type permutation conjugates every summary output") {
  std::mt19937_64 rng(13);
  const auto model = test::random_exp_model(rng, 4, 0.7, 0.2);
  const int d = model.dim();
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<double> mu2(d);
  std::vector<Kernel> k2(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    mu2[i] = model.mu()[perm[i]];
    for (int j = 0; j < d; ++j) k2[static_cast<size_t>(i) * d + j] = model.kernel(perm[i], perm[j]);
  }
  const auto s = build_summary(model);
  const auto s2 = build_summary(HawkesModel(std::move(mu2), std::move(k2)));
  CHECK(s2.rho == doctest::Approx(s.rho).epsilon(1e-9));
  for (int i = 0; i < d; ++i) {
    CHECK(s2.lambda[i] == doctest::Approx(s.lambda[perm[i]]).epsilon(1e-10));
    for (int j = 0; j < d; ++j)
      CHECK(s2.resolvent(i, j) == doctest::Approx(s.resolvent(perm[i], perm[j])).epsilon(1e-10));
  }
}

TEST_CASE("renewal density: poisson model is atom only") {
  const auto model = test::poisson_model({1.0, 2.0});
  const auto r = renewal_density(model, 0.05, 5.0);
  CHECK(r.identity_atom);
  for (const auto& row : r.phi)
    for (double v : row) CHECK(v == 0.0);
  const Mat integral = r.integral_with_atom();
  CHECK(integral(0, 0) == 1.0);
  CHECK(integral(0, 1) == 0.0);
}

TEST_CASE("renewal density: scalar closed form") {
  // alpha=0.5, beta=1: continuous part is alpha*beta*exp(-beta(1-alpha)t)
  const auto model = test::scalar_model();
  const double dt = 0.01;
  const auto r = renewal_density(model, dt, 30.0);
  CHECK(r.value(0, 0, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
  double sup_err = 0.0;
  for (int k = 0; k < r.len; ++k) {
    const double t = k * dt;
    sup_err = std::max(sup_err, std::fabs(r.entry(0, 0)[k] - 0.5 * std::exp(-0.5 * t)));
  }
  CHECK(sup_err < 1e-4);
  // integral recovers Psi = 1 within the default-grid tolerance
  const double with_atom = r.integral_with_atom()(0, 0);
  CHECK(test::close_rel(with_atom, 2.0, 1e-3));

  // refinement: observed order >= 1
  const auto r2 = renewal_density(model, dt / 2.0, 30.0);
  const double err1 = std::fabs(with_atom - 2.0);
  const double err2 = std::fabs(r2.integral_with_atom()(0, 0) - 2.0);
  CHECK(err2 <= err1 / 1.9);
}

TEST_CASE("renewal density: grid kernel matches its own integrated matrix") {
  // grid-sampled exponential; consistency is against the trapezoid gbar
  const double gdt = 0.02;
  std::vector<double> vals;
  for (int k = 0; k * gdt <= 25.0; ++k) vals.push_back(0.5 * std::exp(-1.0 * k * gdt));
  const HawkesModel model({1.0}, {Kernel::grid(gdt, std::move(vals))});
  const auto s = build_summary(model);
  const auto r = renewal_density(model, 0.02, 40.0);
  CHECK(test::close_rel(r.integral_with_atom()(0, 0), s.resolvent(0, 0), 1e-3));
}

TEST_CASE("renewal density: unattainable tolerance raises convergence error") {
  try {
    renewal_density(test::scalar_model(), 0.05, 10.0, 1e-30);
    FAIL("expected convergence error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::convergence);
  }
}

TEST_CASE("renewal density: grid preconditions") {
  const auto model = test::scalar_model();
  CHECK_THROWS_AS(renewal_density(model, 0.05, 10.02), Error);
  CHECK_THROWS_AS(renewal_density(model, -0.05, 10.0), Error);
}

TEST_SUITE_END();
