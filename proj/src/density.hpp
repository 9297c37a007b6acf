#ifndef HAWKES_DENSITY_HPP
#define HAWKES_DENSITY_HPP

#include <map>
#include <mutex>
#include <vector>

#include "cumulants.hpp"
#include "model.hpp"

namespace hawkes {

struct CumulantQuery {
  std::vector<int> types;     // 1-based
  std::vector<double> times;  // same length as types
};

// Density value split into the continuous part and the atomic parts active
// at the query. Atomic contributions are supported on exact time
// coincidences; the key holds, per leaf index, the smallest leaf index
// forced equal-time with it, so (0,0,2) marks a delta on t1 = t2. Patterns
// whose coincidences the query does not satisfy are omitted.
struct DensityValue {
  double continuous = 0.0;
  std::map<std::vector<int>, double> atoms;
  double atom_total() const {
    double s = 0.0;
    for (const auto& [pat, v] : atoms) s += v;
    return s;
  }
};

struct DensityOptions {
  int max_order = 3;  // 4 is opt-in: 26 trees with 3-deep time integrals
};

// Evaluates n-th order cumulant densities by quadrature of the per-tree
// integral terms on the renewal grid. The atom of R_t is resolved
// symbolically: each leaf edge splits into a pinned branch (the delta fixes
// the branching time and type) and a continuous branch, so deltas are never
// sampled. Internal edges carry the continuous part only.
//
// The renewal density must outlive the evaluator. eval() is safe to call
// concurrently.
class DensityEvaluator {
 public:
  DensityEvaluator(const BranchingSummary& summary, const RenewalDensity& renewal,
                   std::vector<int> types, DensityOptions opts = {});

  DensityValue eval(const std::vector<double>& times) const;
  int order() const { return n_; }

 private:
  struct Case {
    std::vector<int> pin_leaf;  // per internal node: pinning leaf (0-based) or -1
    std::vector<int> pattern;   // per leaf: min leaf index of its equal-time block
    bool has_ties = false;
  };
  struct CompiledTree {
    TreeTerm term;
    std::vector<Case> cases;
  };
  struct GridFn {
    long k0 = 0;  // sample q corresponds to grid index k0 + q
    std::vector<double> v;
  };

  double phi(int i, int j, double t) const { return renewal_->value(i, j, t); }
  const std::vector<double>& etable(int a, int n, int m) const;
  double etable_at(const std::vector<double>& table, double delta) const;
  double case_value(const CompiledTree& ct, const Case& cs, const std::vector<int>& sigma,
                    const std::vector<double>& times, double anchor) const;

  BranchingSummary summary_;
  const RenewalDensity* renewal_;
  std::vector<int> types_;  // 0-based
  int n_ = 0;
  int d_ = 0;
  double dt_ = 0.0;
  double horizon_ = 0.0;
  int hlen_ = 0;
  std::vector<CompiledTree> trees_;
  mutable std::map<int, std::vector<double>> etables_;
  mutable std::mutex etable_mutex_;
};

DensityValue cumulant_density(const BranchingSummary& summary, const RenewalDensity& renewal,
                              const CumulantQuery& query, DensityOptions opts = {});

}  // namespace hawkes

#endif
