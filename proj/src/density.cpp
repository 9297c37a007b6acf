#include "density.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hawkes {

namespace {

struct Interval {
  double lo = -1e300;
  double hi = 1e300;
  void clip(double a, double b) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  bool empty() const { return lo > hi + 1e-12; }
};

}  // namespace

DensityEvaluator::DensityEvaluator(const BranchingSummary& summary, const RenewalDensity& renewal,
                                   std::vector<int> types, DensityOptions opts)
    : summary_(summary), renewal_(&renewal) {
  require(opts.max_order >= 1 && opts.max_order <= 4, ErrorCode::invalid_argument,
          "density evaluation supports orders 1..4");
  d_ = summary.dim;
  n_ = static_cast<int>(types.size());
  require(n_ >= 1, ErrorCode::invalid_argument, "empty type multi-index");
  require(n_ <= opts.max_order, ErrorCode::size,
          "density order " + std::to_string(n_) + " beyond the enabled limit " +
              std::to_string(opts.max_order));
  require(renewal.dim == d_, ErrorCode::invalid_argument, "renewal/summary dimension mismatch");
  types_.reserve(types.size());
  for (int t : types) {
    require(t >= 1 && t <= d_, ErrorCode::invalid_argument, "type index out of range");
    types_.push_back(t - 1);
  }
  dt_ = renewal.dt;
  horizon_ = renewal.horizon;
  hlen_ = renewal.len;
  if (n_ == 1) return;

  for (const LeafLabeledTree& tree : enumerate_trees(n_)) {
    CompiledTree ct;
    ct.term = compile_tree_term(tree);
    const auto& internals = ct.term.internals;
    const int ni = static_cast<int>(internals.size());

    // leaf -> owning internal node
    std::vector<int> owner(n_, -1);
    for (int v = 0; v < ni; ++v)
      for (int label : internals[v].leaf_labels) owner[label - 1] = v;

    // every subset of leaves may take the atomic branch of its R factor;
    // a pinned node's type is forced, so mixed-type groups vanish
    for (int mask = 0; mask < (1 << n_); ++mask) {
      Case cs;
      cs.pin_leaf.assign(ni, -1);
      cs.pattern.resize(n_);
      for (int k = 0; k < n_; ++k) cs.pattern[k] = k;
      bool viable = true;
      for (int v = 0; v < ni && viable; ++v) {
        int first = -1;
        for (int label : internals[v].leaf_labels) {
          const int k = label - 1;
          if (!(mask & (1 << k))) continue;
          if (first < 0) {
            first = k;
            cs.pin_leaf[v] = k;
          } else {
            if (types_[k] != types_[first]) {
              viable = false;
              break;
            }
            cs.pattern[k] = first;
            cs.has_ties = true;
          }
        }
      }
      if (viable) ct.cases.push_back(std::move(cs));
    }
    trees_.push_back(std::move(ct));
  }
}

const std::vector<double>& DensityEvaluator::etable(int a, int n, int m) const {
  const int key = (a * d_ + n) * d_ + m;
  std::lock_guard<std::mutex> lock(etable_mutex_);
  auto it = etables_.find(key);
  if (it != etables_.end()) return it->second;

  // E(delta) = integral over y in [0, H] of phi[a,n](y) phi[m,n](delta + y)
  const auto& left = renewal_->entry(a, n);
  const auto& right = renewal_->entry(m, n);
  std::vector<double> table(2 * hlen_ - 1, 0.0);
  for (int q = -(hlen_ - 1); q <= hlen_ - 1; ++q) {
    const int j0 = std::max(0, -q);
    const int j1 = std::min(hlen_ - 1, hlen_ - 1 - q);
    if (j0 >= j1) continue;
    double sum = 0.5 * (left[j0] * right[j0 + q] + left[j1] * right[j1 + q]);
    for (int j = j0 + 1; j < j1; ++j) sum += left[j] * right[j + q];
    table[q + hlen_ - 1] = sum * dt_;
  }
  return etables_.emplace(key, std::move(table)).first->second;
}

double DensityEvaluator::etable_at(const std::vector<double>& table, double delta) const {
  const double pos = delta / dt_ + (hlen_ - 1);
  if (pos <= 0.0 || pos >= static_cast<double>(table.size() - 1)) return 0.0;
  const auto idx = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(idx);
  return table[idx] + frac * (table[idx + 1] - table[idx]);
}

namespace {

// trapezoid integral of phi(x - s) w(x) over the grid samples of w, with the
// support edge at x = s handled one-sidedly
double integrate_against(const RenewalDensity& renewal, int i, int j, double s, double anchor,
                         double dt, long k0, const std::vector<double>& w) {
  if (w.empty()) return 0.0;
  const long kend = k0 + static_cast<long>(w.size()) - 1;
  // first sample at or above s
  const double pos = (s - anchor) / dt;
  long kfrom = static_cast<long>(std::ceil(pos - 1e-9));
  kfrom = std::max(kfrom, k0);
  if (kfrom > kend) return 0.0;
  double sum = 0.0;
  for (long k = kfrom; k <= kend; ++k) {
    const double x = anchor + static_cast<double>(k) * dt;
    const double f = renewal.value(i, j, x - s) * w[static_cast<size_t>(k - k0)];
    sum += (k == kfrom || k == kend) ? 0.5 * f : f;
  }
  return sum * dt;
}

double trapezoid(const std::vector<double>& v, double dt) {
  if (v.size() < 2) return 0.0;
  double sum = 0.5 * (v.front() + v.back());
  for (size_t k = 1; k + 1 < v.size(); ++k) sum += v[k];
  return sum * dt;
}

}  // namespace

double DensityEvaluator::case_value(const CompiledTree& ct, const Case& cs,
                                    const std::vector<int>& sigma,
                                    const std::vector<double>& times, double anchor) const {
  const auto& internals = ct.term.internals;
  const int ni = static_cast<int>(internals.size());

  // continuous leaves per node under this case
  std::vector<GridFn> message(ni);
  std::vector<double> pinned_value(ni, 1.0);
  std::vector<char> dead(ni, 0);

  for (int v = ni - 1; v >= 0; --v) {
    const auto& node = internals[v];
    std::vector<int> cont;
    for (int label : node.leaf_labels) {
      const int k = label - 1;
      const bool is_atom = cs.pin_leaf[v] == k || (cs.pattern[k] != k);
      if (!is_atom) cont.push_back(k);
    }
    for (int child : node.internal_children)
      if (dead[child]) dead[v] = 1;
    if (dead[v]) continue;

    if (cs.pin_leaf[v] >= 0) {
      // pinned node: everything collapses to a scalar at its leaf's time.
      // A factor evaluated exactly at the support jump (tied times) takes
      // the midpoint value, so the reported continuous part equals the
      // two-sided limit.
      const auto phi_point = [&](int i, int j, double t) {
        const double v0 = phi(i, j, t);
        return t == 0.0 ? 0.5 * v0 : v0;
      };
      const double tv = times[cs.pin_leaf[v]];
      double prod = 1.0;
      for (int k : cont) prod *= phi_point(types_[k], sigma[v], times[k] - tv);
      for (int child : node.internal_children) {
        if (cs.pin_leaf[child] >= 0) {
          prod *= phi_point(sigma[child], sigma[v], times[cs.pin_leaf[child]] - tv) *
                  pinned_value[child];
        } else {
          prod *= integrate_against(*renewal_, sigma[child], sigma[v], tv, anchor, dt_,
                                    message[child].k0, message[child].v);
        }
        if (prod == 0.0) break;
      }
      pinned_value[v] = prod;
      if (prod == 0.0) dead[v] = 1;
      continue;
    }

    // free node: support interval from all factors
    Interval box;
    for (int k : cont) box.clip(times[k] - horizon_, times[k]);
    for (int child : node.internal_children) {
      if (cs.pin_leaf[child] >= 0) {
        const double tc = times[cs.pin_leaf[child]];
        box.clip(tc - horizon_, tc);
      } else {
        const double child_lo = anchor + static_cast<double>(message[child].k0) * dt_;
        const double child_hi =
            child_lo + static_cast<double>(message[child].v.size() - 1) * dt_;
        box.clip(child_lo - horizon_, child_hi);
      }
    }
    if (box.empty()) {
      dead[v] = 1;
      continue;
    }
    const long klo = static_cast<long>(std::ceil((box.lo - anchor) / dt_ - 1e-9));
    const long khi = static_cast<long>(std::floor((box.hi - anchor) / dt_ + 1e-9));
    if (klo > khi) {
      dead[v] = 1;
      continue;
    }
    const auto len = static_cast<size_t>(khi - klo + 1);

    // root with a single continuous leaf and a single free child: fold the
    // root integral through the precomputed pair correlation table instead
    // of materializing the root message (keeps n=3 queries linear in the
    // grid size)
    if (v == 0 && cont.size() == 1 && node.internal_children.size() == 1 &&
        cs.pin_leaf[node.internal_children[0]] < 0) {
      message[v].k0 = klo;
      message[v].v.clear();  // marked by the shortcut path below
      continue;
    }

    GridFn fn;
    fn.k0 = klo;
    fn.v.resize(len);
    // per-child convolution against this node's sample range
    std::vector<std::vector<double>> child_conv;
    for (int child : node.internal_children) {
      if (cs.pin_leaf[child] >= 0) continue;
      std::vector<double> conv(len);
      for (size_t q = 0; q < len; ++q) {
        const double s = anchor + static_cast<double>(klo + static_cast<long>(q)) * dt_;
        conv[q] = integrate_against(*renewal_, sigma[child], sigma[v], s, anchor, dt_,
                                    message[child].k0, message[child].v);
      }
      child_conv.push_back(std::move(conv));
    }
    for (size_t q = 0; q < len; ++q) {
      const double s = anchor + static_cast<double>(klo + static_cast<long>(q)) * dt_;
      double prod = 1.0;
      for (int k : cont) {
        prod *= phi(types_[k], sigma[v], times[k] - s);
        if (prod == 0.0) break;
      }
      if (prod != 0.0) {
        size_t ci = 0;
        for (int child : node.internal_children) {
          if (cs.pin_leaf[child] >= 0) {
            prod *= phi(sigma[child], sigma[v], times[cs.pin_leaf[child]] - s) *
                    pinned_value[child];
          } else {
            prod *= child_conv[ci++][q];
          }
          if (prod == 0.0) break;
        }
      }
      fn.v[q] = prod;
    }
    message[v] = std::move(fn);
  }

  if (dead[0]) return 0.0;

  const auto& root = internals[0];
  const double rate = summary_.lambda[sigma[0]];
  if (cs.pin_leaf[0] >= 0) return rate * pinned_value[0];

  // shortcut marked above
  if (message[0].v.empty()) {
    int leaf = -1;
    for (int label : root.leaf_labels) {
      const int k = label - 1;
      if (cs.pin_leaf[0] != k && cs.pattern[k] == k) leaf = k;
    }
    const int child = root.internal_children[0];
    const auto& table = etable(types_[leaf], sigma[0], sigma[child]);
    const auto& w = message[child];
    if (w.v.empty()) return 0.0;
    double sum = 0.0;
    for (size_t q = 0; q < w.v.size(); ++q) {
      const double x = anchor + static_cast<double>(w.k0 + static_cast<long>(q)) * dt_;
      double f = w.v[q] * etable_at(table, x - times[leaf]);
      if (q == 0 || q + 1 == w.v.size()) f *= 0.5;
      sum += f;
    }
    return rate * sum * dt_;
  }

  return rate * trapezoid(message[0].v, dt_);
}

DensityValue DensityEvaluator::eval(const std::vector<double>& times) const {
  require(static_cast<int>(times.size()) == n_, ErrorCode::invalid_argument,
          "times/types length mismatch");
  DensityValue out;
  if (n_ == 1) {
    out.continuous = summary_.lambda[types_[0]];
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(times.begin(), times.end());
  require(*hi_it - *lo_it <= horizon_ + 1e-9, ErrorCode::grid,
          "query lags exceed the renewal horizon");
  const double anchor = *lo_it;

  for (const auto& ct : trees_) {
    const int ni = static_cast<int>(ct.term.internals.size());
    for (const auto& cs : ct.cases) {
      if (cs.has_ties) {
        bool active = true;
        for (int k = 0; k < n_ && active; ++k)
          if (times[k] != times[cs.pattern[k]]) active = false;
        if (!active) continue;
      }
      // enumerate type labels of free internal nodes
      std::vector<int> sigma(ni, 0);
      std::vector<int> free_nodes;
      for (int v = 0; v < ni; ++v) {
        if (cs.pin_leaf[v] >= 0)
          sigma[v] = types_[cs.pin_leaf[v]];
        else
          free_nodes.push_back(v);
      }
      double total = 0.0;
      std::vector<int> odo(free_nodes.size(), 0);
      for (;;) {
        for (size_t f = 0; f < free_nodes.size(); ++f) sigma[free_nodes[f]] = odo[f];
        total += case_value(ct, cs, sigma, times, anchor);
        size_t f = 0;
        while (f < odo.size() && ++odo[f] == d_) odo[f++] = 0;
        if (f == odo.size()) break;
      }
      if (cs.has_ties)
        out.atoms[cs.pattern] += total;
      else
        out.continuous += total;
    }
  }
  return out;
}

DensityValue cumulant_density(const BranchingSummary& summary, const RenewalDensity& renewal,
                              const CumulantQuery& query, DensityOptions opts) {
  DensityEvaluator eval(summary, renewal, query.types, opts);
  return eval.eval(query.times);
}

}  // namespace hawkes
