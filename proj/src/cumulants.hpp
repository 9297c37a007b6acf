#ifndef HAWKES_CUMULANTS_HPP
#define HAWKES_CUMULANTS_HPP

#include <vector>

#include "model.hpp"
#include "trees.hpp"

namespace hawkes {

// One cumulant term: a canonical tree compiled into its factor structure.
// Leaf edges carry R factors, internal edges carry Psi factors, the root
// carries a stationary-rate factor; kinds follow from the edge endpoints
// alone.
struct TreeTerm {
  enum class FactorKind { resolvent, psi };
  struct Edge {
    int parent;  // node id in `tree`
    int child;
    FactorKind kind;
  };
  // contraction plan: internal nodes in parent-before-child order
  struct InternalNode {
    int node_id = 0;
    std::vector<int> leaf_labels;       // labels of direct leaf children
    std::vector<int> internal_children; // indices into `internals`
    int parent = -1;                    // index into `internals`, -1 for root
  };

  LeafLabeledTree tree;
  std::vector<Edge> edges;
  std::vector<InternalNode> internals;  // empty iff the tree is a bare leaf
  int order = 0;
};

TreeTerm compile_tree_term(const LeafLabeledTree& tree);

// Integrated cumulant of the given type multi-index by summing all tree
// contractions: leaf k under node v contributes R[i_k, j_v], an internal
// edge contributes Psi[j_child, j_parent], the root contributes
// lambda[j_root]; internal type labels are summed over 1..d.
// Types are 1-based. n = 1 returns lambda[i_1].
double integrated_cumulant(const BranchingSummary& summary, const std::vector<int>& types,
                           int n_max = kTreeEnumerationMax);

// Per-tree contributions, ordered like enumerate_trees(n).
std::vector<double> integrated_cumulant_terms(const BranchingSummary& summary,
                                              const std::vector<int>& types,
                                              int n_max = kTreeEnumerationMax);

// Hand-coded closed forms for orders 2 and 3.
Mat integrated_covariance(const BranchingSummary& summary);
std::vector<double> integrated_third(const BranchingSummary& summary);  // [i*d*d + j*d + k]

// Partial sums of the motif expansion: every R replaced by sum of powers
// of gbar (from power 0) and every Psi by the same sum from power 1,
// truncated at a total power budget. Entry p is the partial sum over
// assignments of total power <= p.
std::vector<double> motif_series(const BranchingSummary& summary, const std::vector<int>& types,
                                 int max_total_power, int n_max = kTreeEnumerationMax);

}  // namespace hawkes

#endif
