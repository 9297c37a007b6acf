#ifndef HAWKES_TREES_HPP
#define HAWKES_TREES_HPP

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

namespace hawkes {

// Rooted tree with n labeled leaves and internal out-degree >= 2; the
// combinatorial skeleton of one cumulant term. Nodes are stored pre-order
// with the root at index 0. Leaves carry labels 1..n; internal nodes have
// label 0.
struct LeafLabeledTree {
  struct Node {
    int label = 0;
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  bool is_leaf(int id) const { return nodes[id].children.empty(); }
  int leaf_count() const;
  // Nested-parenthesis form, e.g. "(1,(2,3))". Canonical trees compare
  // equal iff their encodings match.
  std::string encode() const;
};

constexpr int kTreeEnumerationMax = 8;

// Exact number of such trees (no enumeration; memoized recurrence over the
// block-size profile of leaf-set partitions).
mpz_class count_trees(int n);

// Streams every canonical tree exactly once in a deterministic order.
// Throws SizeError beyond n_max (term count grows supra-exponentially).
void for_each_tree(int n, const std::function<void(const LeafLabeledTree&)>& visit,
                   int n_max = kTreeEnumerationMax);

// Materialized enumeration in canonical-lexicographic encoding order.
std::vector<LeafLabeledTree> enumerate_trees(int n, int n_max = kTreeEnumerationMax);

// Validates structure (label bijection, out-degree >= 2) and returns the
// canonical form: children ordered by the minimum leaf label of their
// subtree, recursively; nodes renumbered pre-order.
LeafLabeledTree canonical_form(const LeafLabeledTree& tree);

}  // namespace hawkes

#endif
