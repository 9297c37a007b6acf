#ifndef HAWKES_ESTIMATE_HPP
#define HAWKES_ESTIMATE_HPP

#include <array>
#include <string>
#include <vector>

#include "simulate.hpp"

namespace hawkes {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;
  std::string method;
};

struct LagGrid {
  double lo = 0.0;
  double step = 0.0;
  int bins = 0;
  double hi() const { return lo + step * bins; }
  double center(int b) const { return lo + step * (b + 0.5); }
};

// Counts of each type per window of width bin_width, restricted to
// [margin, t_obs - margin).
struct BinnedCounts {
  double bin_width = 0.0;
  double margin = 0.0;
  int dim = 0;
  long long interior_bins = 0;
  std::vector<std::vector<long long>> counts;  // [bin][type-1]
};

BinnedCounts bin_counts(const EventStream& stream, double bin_width, double margin);

// ---- moment / cumulant machinery (subsets indexed by bitmask) ----

// raw product moments <prod_{i in mask} X_i> for every non-empty mask
std::vector<double> subset_moments(const std::vector<std::vector<double>>& samples);

// joint cumulant of the variables in `mask` by the set-partition formula
double cumulant_of(int mask, const std::vector<double>& moments);

// raw moment of `mask` rebuilt from cumulants (the dual partition formula)
double moment_of(int mask, const std::vector<double>& cumulants);

// Joint cumulant of n aligned series (n <= 6, length >= 30) with a
// delete-one jackknife standard error.
Estimate joint_cumulant(const std::vector<std::vector<double>>& samples);

// Cumulant of interior-window counts for the type multi-index, divided by
// the window length; estimates the integrated cumulant for windows much
// longer than the correlation time.
Estimate empirical_integrated_cumulant(const EventStream& stream, const std::vector<int>& types,
                                       double bin_width, double margin);

// Histogram estimate of the covariance density at each lag bin:
// ordered-pair rate minus the rate product. Batch-means errors over
// time blocks of reference events.
std::vector<Estimate> covariance_density_estimate(const EventStream& stream, int type_i,
                                                  int type_j, const LagGrid& grid, double margin,
                                                  int batches = 20);

// Same histogram restricted to pairs sharing a cluster, without the mean
// subtraction. Needs lineage.
std::vector<Estimate> same_cluster_density2(const EventStream& stream, int type_i, int type_j,
                                            const LagGrid& grid, double margin, int batches = 20);

// Pair rate over different clusters only; flat at lambda_i lambda_j when
// clusters are independent. Needs lineage.
std::vector<Estimate> different_cluster_density2(const EventStream& stream, int type_i,
                                                 int type_j, const LagGrid& grid, double margin,
                                                 int batches = 20);

// Third-order analogue on a 2-d lag grid (row-major [b2 * g3.bins + b3]):
// rate of ordered same-cluster triples at (t2 - t1, t3 - t1).
std::vector<Estimate> same_cluster_density3(const EventStream& stream,
                                            const std::array<int, 3>& types, const LagGrid& grid2,
                                            const LagGrid& grid3, double margin, int batches = 20);

}  // namespace hawkes

#endif
