#ifndef HAWKES_MODEL_HPP
#define HAWKES_MODEL_HPP

#include <cstdint>
#include <vector>

#include "kernel.hpp"
#include "linalg.hpp"

namespace hawkes {

constexpr double kDefaultStabilityMargin = 1e-6;

// Linear multivariate Hawkes model: base rates mu and a d x d matrix of
// interaction kernels, entry (i, j) being the influence of type-j events on
// the type-i rate. Construction validates positivity and subcriticality;
// instances are immutable afterwards.
class HawkesModel {
 public:
  HawkesModel(std::vector<double> mu, std::vector<Kernel> kernels,
              double stability_margin = kDefaultStabilityMargin);

  int dim() const { return d_; }
  const std::vector<double>& mu() const { return mu_; }
  const Kernel& kernel(int i, int j) const { return kernels_[static_cast<size_t>(i) * d_ + j]; }
  const Mat& gbar() const { return gbar_; }
  double rho() const { return rho_; }

  // Longest kernel decay scale; 0 for a pure Poisson model.
  double max_timescale() const;

  // Lag beyond which the renewal mass tail drops under `tail`; used for
  // horizons, burn-in and interior margins.
  double correlation_horizon(double tail = 1e-3) const;

  // FNV-1a over the defining parameters; identifies the model in streams.
  uint64_t param_hash() const { return hash_; }

 private:
  int d_;
  std::vector<double> mu_;
  std::vector<Kernel> kernels_;
  Mat gbar_;
  double rho_;
  uint64_t hash_;
};

// Derived branching quantities of a stable model.
struct BranchingSummary {
  int dim = 0;
  Mat gbar;                    // integrated kernel matrix
  double rho = 0.0;            // spectral radius of gbar
  std::vector<double> lambda;  // stationary rates, solves (I - gbar) lambda = mu
  Mat resolvent;               // R = (I - gbar)^-1
  Mat psi;                     // R - I
};

BranchingSummary build_summary(const HawkesModel& model, double tol = 1e-12,
                               double stability_margin = kDefaultStabilityMargin);

// Time-resolved renewal density R_t = I delta(t) + Phi(t). Only the
// continuous part Phi is sampled (at k*dt, k = 0..len-1, covering
// [0, horizon]); the identity atom at t = 0 is kept symbolic.
struct RenewalDensity {
  int dim = 0;
  double dt = 0.0;
  double horizon = 0.0;
  int len = 0;
  bool identity_atom = true;
  std::vector<std::vector<double>> phi;  // indexed [i*dim + j][k]

  const std::vector<double>& entry(int i, int j) const { return phi[static_cast<size_t>(i) * dim + j]; }
  // Linear interpolation of the continuous part; 0 outside [0, horizon].
  double value(int i, int j, double t) const;
  // Trapezoid integral of the continuous part plus the identity atom.
  Mat integral_with_atom() const;
};

// Solves Phi = G + G * Phi on the grid by truncated Neumann iteration of
// trapezoid-order convolutions; stops when the sup-norm increment drops
// under tol. horizon must be a positive multiple of dt.
RenewalDensity renewal_density(const HawkesModel& model, double dt, double horizon,
                               double tol = 1e-8);

// Grid defaults derived from the kernel scales (used by the CLI when flags
// are not given).
double default_renewal_dt(const HawkesModel& model);
double default_renewal_horizon(const HawkesModel& model, double tail = 1e-6);

}  // namespace hawkes

#endif
