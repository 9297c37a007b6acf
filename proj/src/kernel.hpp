#ifndef HAWKES_KERNEL_HPP
#define HAWKES_KERNEL_HPP

#include <vector>

namespace hawkes {

// Interaction kernel g(t): non-negative, integrable, supported on t >= 0.
// Three flavors:
//   zero         g == 0
//   exponential  g(t) = alpha * beta * exp(-beta t); integral alpha
//   grid         samples at k*dt, linear interpolation, 0 beyond the table
class Kernel {
 public:
  enum class Type { zero, exponential, grid };

  Kernel() : type_(Type::zero) {}
  static Kernel zero() { return Kernel(); }
  static Kernel exponential(double alpha, double beta);
  static Kernel grid(double dt, std::vector<double> values);

  Type type() const { return type_; }
  bool is_zero() const { return type_ == Type::zero; }

  // Density at t; 0 for t < 0 and beyond the support.
  double operator()(double t) const;

  // Expected offspring count (exact for exponential, trapezoid for grid).
  double integral() const { return integral_; }

  // Rough decay scale used to size horizons and burn-in: 1/beta for
  // exponential, table length for grid, 0 for zero.
  double timescale() const;

  // Non-increasing majorant of g on [t, inf), used for thinning bounds.
  double envelope(double t) const;

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double grid_dt() const { return dt_; }
  const std::vector<double>& grid_values() const { return values_; }

  // Cumulative integral of g over [0, t] (matches the trapezoid reading of
  // the grid flavor); used by inverse-CDF offspring sampling.
  double cumulative(double t) const;

  // Inverse of cumulative(): smallest t with cumulative(t) = mass.
  // Requires 0 <= mass <= integral().
  double inverse_cumulative(double mass) const;

 private:
  Type type_;
  double alpha_ = 0.0, beta_ = 0.0;      // exponential
  double dt_ = 0.0;                      // grid
  std::vector<double> values_;           // grid samples
  std::vector<double> cumvals_;          // grid cumulative at nodes
  std::vector<double> suffix_max_;       // grid envelope
  double integral_ = 0.0;
};

}  // namespace hawkes

#endif
