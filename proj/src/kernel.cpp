#include "kernel.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hawkes {

Kernel Kernel::exponential(double alpha, double beta) {
  require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::degenerate,
          "exponential kernel weight must be non-negative");
  require(beta > 0.0 && std::isfinite(beta), ErrorCode::degenerate,
          "exponential kernel rate must be positive");
  Kernel k;
  if (alpha == 0.0) return k;
  k.type_ = Type::exponential;
  k.alpha_ = alpha;
  k.beta_ = beta;
  k.integral_ = alpha;
  return k;
}

Kernel Kernel::grid(double dt, std::vector<double> values) {
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::degenerate, "grid kernel step must be positive");
  require(!values.empty(), ErrorCode::degenerate, "grid kernel needs at least one sample");
  double total = 0.0;
  for (double v : values) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::degenerate,
            "grid kernel samples must be non-negative and finite");
    total += v;
  }
  Kernel k;
  if (total == 0.0) return k;
  k.type_ = Type::grid;
  k.dt_ = dt;
  k.values_ = std::move(values);
  const size_t n = k.values_.size();
  k.cumvals_.resize(n, 0.0);
  for (size_t i = 1; i < n; ++i)
    k.cumvals_[i] = k.cumvals_[i - 1] + 0.5 * dt * (k.values_[i - 1] + k.values_[i]);
  // the tail segment [(n-1)dt, n dt) ramps linearly to zero
  k.integral_ = k.cumvals_[n - 1] + 0.5 * dt * k.values_[n - 1];
  k.suffix_max_.resize(n);
  double run = 0.0;
  for (size_t i = n; i-- > 0;) {
    run = std::max(run, k.values_[i]);
    k.suffix_max_[i] = run;
  }
  return k;
}

double Kernel::operator()(double t) const {
  switch (type_) {
    case Type::zero:
      return 0.0;
    case Type::exponential:
      return t < 0.0 ? 0.0 : alpha_ * beta_ * std::exp(-beta_ * t);
    case Type::grid: {
      if (t < 0.0) return 0.0;
      const double pos = t / dt_;
      const auto idx = static_cast<size_t>(pos);
      if (idx >= values_.size()) return 0.0;
      const double frac = pos - static_cast<double>(idx);
      const double lo = values_[idx];
      const double hi = idx + 1 < values_.size() ? values_[idx + 1] : 0.0;
      return lo + frac * (hi - lo);
    }
  }
  return 0.0;
}

double Kernel::timescale() const {
  switch (type_) {
    case Type::zero:
      return 0.0;
    case Type::exponential:
      return 1.0 / beta_;
    case Type::grid:
      return dt_ * static_cast<double>(values_.size());
  }
  return 0.0;
}

double Kernel::envelope(double t) const {
  switch (type_) {
    case Type::zero:
      return 0.0;
    case Type::exponential:
      return operator()(std::max(t, 0.0));
    case Type::grid: {
      if (t <= 0.0) return suffix_max_[0];
      const auto idx = static_cast<size_t>(t / dt_);
      if (idx >= suffix_max_.size()) return 0.0;
      return suffix_max_[idx];
    }
  }
  return 0.0;
}

double Kernel::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  switch (type_) {
    case Type::zero:
      return 0.0;
    case Type::exponential:
      return alpha_ * (1.0 - std::exp(-beta_ * t));
    case Type::grid: {
      const double pos = t / dt_;
      const auto idx = static_cast<size_t>(pos);
      const size_t n = values_.size();
      if (idx >= n) return integral_;
      const double frac = pos - static_cast<double>(idx);
      const double lo = values_[idx];
      const double hi = idx + 1 < n ? values_[idx + 1] : 0.0;
      const double base = cumvals_[idx];
      // integral of the linear segment over [idx*dt, t]
      return base + dt_ * frac * (lo + 0.5 * frac * (hi - lo));
    }
  }
  return 0.0;
}

double Kernel::inverse_cumulative(double mass) const {
  require(type_ != Type::zero, ErrorCode::invalid_argument, "zero kernel has no inverse cdf");
  require(mass >= 0.0 && mass <= integral_ * (1.0 + 1e-12), ErrorCode::invalid_argument,
          "mass outside kernel integral");
  mass = std::min(mass, integral_);
  if (type_ == Type::exponential) {
    const double u = std::min(mass / alpha_, 1.0 - 1e-16);
    return -std::log1p(-u) / beta_;
  }
  const size_t n = values_.size();
  // locate the segment, then invert the quadratic cumulative within it
  size_t idx = static_cast<size_t>(std::upper_bound(cumvals_.begin(), cumvals_.end(), mass) -
                                   cumvals_.begin());
  if (idx > 0) --idx;
  while (idx + 1 < n && cumvals_[idx + 1] <= mass) ++idx;
  const double rem = mass - cumvals_[idx];
  const double lo = values_[idx];
  const double hi = idx + 1 < n ? values_[idx + 1] : 0.0;
  const double slope = (hi - lo) / dt_;
  double s;  // offset into the segment
  if (std::fabs(slope) < 1e-14 * std::max(1.0, lo)) {
    s = lo > 0.0 ? rem / lo : 0.0;
  } else {
    const double disc = lo * lo + 2.0 * slope * rem;
    s = (-lo + std::sqrt(std::max(disc, 0.0))) / slope;
  }
  s = std::clamp(s, 0.0, dt_);
  return dt_ * static_cast<double>(idx) + s;
}

}  // namespace hawkes
