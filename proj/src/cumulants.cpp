#include "cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "errors.hpp"

namespace hawkes {

TreeTerm compile_tree_term(const LeafLabeledTree& input) {
  TreeTerm term;
  term.tree = canonical_form(input);
  const auto& tree = term.tree;
  term.order = tree.leaf_count();
  if (tree.nodes.size() == 1) return term;  // bare leaf: just the rate factor

  std::vector<int> internal_index(tree.nodes.size(), -1);
  std::function<void(int, int)> walk = [&](int id, int parent_internal) {
    const int self = static_cast<int>(term.internals.size());
    internal_index[id] = self;
    term.internals.push_back({id, {}, {}, parent_internal});
    if (parent_internal >= 0) term.internals[parent_internal].internal_children.push_back(self);
    for (int child : tree.nodes[id].children) {
      if (tree.is_leaf(child)) {
        term.internals[self].leaf_labels.push_back(tree.nodes[child].label);
        term.edges.push_back({id, child, TreeTerm::FactorKind::resolvent});
      } else {
        term.edges.push_back({id, child, TreeTerm::FactorKind::psi});
        walk(child, self);
      }
    }
  };
  walk(0, -1);
  return term;
}

namespace {

void check_types(const std::vector<int>& types, int d) {
  require(!types.empty(), ErrorCode::invalid_argument, "empty type multi-index");
  for (int t : types)
    require(t >= 1 && t <= d, ErrorCode::invalid_argument, "type index out of range");
}

// Contraction value of one compiled tree. values[v][j] is the product of
// subtree factors below internal node v given its type label j; children
// are folded in with a Psi[j_child, j_parent] sum.
double contract(const TreeTerm& term, const BranchingSummary& s, const std::vector<int>& types) {
  const int d = s.dim;
  if (term.internals.empty()) return s.lambda[types[0] - 1];

  std::vector<std::vector<double>> value(term.internals.size());
  for (size_t v = term.internals.size(); v-- > 0;) {
    const auto& node = term.internals[v];
    std::vector<double> val(d, 1.0);
    for (int j = 0; j < d; ++j) {
      double prod = 1.0;
      for (int leaf : node.leaf_labels) prod *= s.resolvent(types[leaf - 1] - 1, j);
      for (int child : node.internal_children) {
        double sum = 0.0;
        for (int m = 0; m < d; ++m) sum += s.psi(m, j) * value[child][m];
        prod *= sum;
      }
      val[j] = prod;
    }
    value[v] = std::move(val);
  }
  double out = 0.0;
  for (int j = 0; j < d; ++j) out += s.lambda[j] * value[0][j];
  return out;
}

}  // namespace

std::vector<double> integrated_cumulant_terms(const BranchingSummary& summary,
                                              const std::vector<int>& types, int n_max) {
  check_types(types, summary.dim);
  const int n = static_cast<int>(types.size());
  std::vector<double> terms;
  for (const LeafLabeledTree& tree : enumerate_trees(n, n_max))
    terms.push_back(contract(compile_tree_term(tree), summary, types));
  return terms;
}

double integrated_cumulant(const BranchingSummary& summary, const std::vector<int>& types,
                           int n_max) {
  check_types(types, summary.dim);
  const int n = static_cast<int>(types.size());
  double total = 0.0;
  for_each_tree(n, [&](const LeafLabeledTree& tree) {
    total += contract(compile_tree_term(tree), summary, types);
  }, n_max);
  return total;
}

Mat integrated_covariance(const BranchingSummary& s) {
  const int d = s.dim;
  Mat out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double sum = 0.0;
      for (int m = 0; m < d; ++m) sum += s.lambda[m] * s.resolvent(i, m) * s.resolvent(j, m);
      out(i, j) = sum;
    }
  return out;
}

std::vector<double> integrated_third(const BranchingSummary& s) {
  const int d = s.dim;
  std::vector<double> out(static_cast<size_t>(d) * d * d, 0.0);
  const Mat& r = s.resolvent;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double sum = 0.0;
        for (int m = 0; m < d; ++m) sum += s.lambda[m] * r(i, m) * r(j, m) * r(k, m);
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n) {
            const double stiff = s.lambda[n] * s.psi(m, n);
            sum += stiff * r(i, m) * r(j, m) * r(k, n);
            sum += stiff * r(j, m) * r(k, m) * r(i, n);
            sum += stiff * r(i, m) * r(k, m) * r(j, n);
          }
        out[(static_cast<size_t>(i) * d + j) * d + k] = sum;
      }
  return out;
}

namespace {

// power series (in total gbar power) of one subtree contraction
using PowerSeries = std::vector<std::vector<double>>;  // [type][power]

PowerSeries convolve_factor(const PowerSeries& acc, const std::vector<std::vector<double>>& factor,
                            int d, int pmax) {
  PowerSeries out(d, std::vector<double>(pmax + 1, 0.0));
  for (int j = 0; j < d; ++j)
    for (int p = 0; p <= pmax; ++p) {
      const double base = acc[j][p];
      if (base == 0.0) continue;
      for (int q = 0; p + q <= pmax; ++q) out[j][p + q] += base * factor[j][q];
    }
  return out;
}

}  // namespace

std::vector<double> motif_series(const BranchingSummary& s, const std::vector<int>& types,
                                 int max_total_power, int n_max) {
  check_types(types, s.dim);
  require(max_total_power >= 0, ErrorCode::invalid_argument, "power budget must be >= 0");
  const int d = s.dim;
  const int n = static_cast<int>(types.size());
  const int pmax = max_total_power;

  std::vector<Mat> gpow{Mat::identity(d)};
  for (int p = 1; p <= pmax; ++p) gpow.push_back(gpow.back() * s.gbar);

  std::vector<double> coeff(pmax + 1, 0.0);
  if (n == 1) {
    coeff[0] = s.lambda[types[0] - 1];
  } else {
    for_each_tree(n, [&](const LeafLabeledTree& tree) {
      const TreeTerm term = compile_tree_term(tree);
      // series[v][j][p]: subtree of internal node v, node type j, total power p
      std::vector<PowerSeries> series(term.internals.size());
      for (size_t v = term.internals.size(); v-- > 0;) {
        const auto& node = term.internals[v];
        PowerSeries acc(d, std::vector<double>(pmax + 1, 0.0));
        for (int j = 0; j < d; ++j) acc[j][0] = 1.0;
        std::vector<std::vector<double>> factor(d, std::vector<double>(pmax + 1, 0.0));
        for (int leaf : node.leaf_labels) {
          const int row = types[leaf - 1] - 1;
          for (int j = 0; j < d; ++j)
            for (int p = 0; p <= pmax; ++p) factor[j][p] = gpow[p](row, j);
          acc = convolve_factor(acc, factor, d, pmax);
        }
        for (int child : node.internal_children) {
          // fold the child series through a Psi edge: powers >= 1
          for (int j = 0; j < d; ++j)
            for (int p = 0; p <= pmax; ++p) {
              double sum = 0.0;
              for (int q = 1; q <= p; ++q)
                for (int m = 0; m < d; ++m) sum += gpow[q](m, j) * series[child][m][p - q];
              factor[j][p] = sum;
            }
          acc = convolve_factor(acc, factor, d, pmax);
        }
        series[v] = std::move(acc);
      }
      for (int j = 0; j < d; ++j)
        for (int p = 0; p <= pmax; ++p) coeff[p] += s.lambda[j] * series[0][j][p];
    }, n_max);
  }

  std::vector<double> partial(pmax + 1, 0.0);
  double run = 0.0;
  for (int p = 0; p <= pmax; ++p) {
    run += coeff[p];
    partial[p] = run;
  }
  return partial;
}

}  // namespace hawkes
