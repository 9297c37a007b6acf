#include "trees.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "errors.hpp"

namespace hawkes {

int LeafLabeledTree::leaf_count() const {
  int n = 0;
  for (const Node& node : nodes)
    if (node.children.empty()) ++n;
  return n;
}

std::string LeafLabeledTree::encode() const {
  std::string out;
  std::function<void(int)> rec = [&](int id) {
    const Node& node = nodes[id];
    if (node.children.empty()) {
      out += std::to_string(node.label);
      return;
    }
    out += '(';
    for (size_t c = 0; c < node.children.size(); ++c) {
      if (c) out += ',';
      rec(node.children[c]);
    }
    out += ')';
  };
  if (!nodes.empty()) rec(0);
  return out;
}

namespace {

// Appends `sub` under `tree`, returning the new index of sub's root.
int graft(LeafLabeledTree& tree, const LeafLabeledTree& sub) {
  const int offset = static_cast<int>(tree.nodes.size());
  for (const auto& node : sub.nodes) {
    LeafLabeledTree::Node copy = node;
    for (int& c : copy.children) c += offset;
    tree.nodes.push_back(std::move(copy));
  }
  return offset;
}

LeafLabeledTree make_leaf(int label) {
  LeafLabeledTree t;
  t.nodes.push_back({label, {}});
  return t;
}

// All partitions of `elems` into >= 2 blocks, via restricted growth
// strings. Blocks come out ordered by their minimum element.
void for_each_partition(const std::vector<int>& elems,
                        const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  const int m = static_cast<int>(elems.size());
  std::vector<int> assign(m, 0);
  std::vector<std::vector<int>> blocks;
  std::function<void(int, int)> rec = [&](int pos, int max_block) {
    if (pos == m) {
      if (max_block + 1 >= 2) {
        blocks.assign(max_block + 1, {});
        for (int e = 0; e < m; ++e) blocks[assign[e]].push_back(elems[e]);
        fn(blocks);
      }
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      assign[pos] = b;
      rec(pos + 1, std::max(max_block, b));
    }
  };
  if (m >= 2) {
    assign[0] = 0;
    rec(1, 0);
  }
}

// All canonical trees on the given (sorted) leaf set. Every tree on >= 2
// leaves is a root whose children are the blocks of a partition with >= 2
// parts; block order by minimum leaf is exactly the canonical child order,
// so products of block subtrees are pairwise distinct by construction.
std::vector<LeafLabeledTree> trees_on(const std::vector<int>& leaves) {
  if (leaves.size() == 1) return {make_leaf(leaves[0])};
  std::vector<LeafLabeledTree> out;
  for_each_partition(leaves, [&](const std::vector<std::vector<int>>& blocks) {
    std::vector<std::vector<LeafLabeledTree>> choices;
    choices.reserve(blocks.size());
    for (const auto& block : blocks) choices.push_back(trees_on(block));
    std::vector<size_t> pick(blocks.size(), 0);
    for (;;) {
      LeafLabeledTree tree;
      tree.nodes.push_back({0, {}});
      for (size_t b = 0; b < blocks.size(); ++b) {
        const int child = graft(tree, choices[b][pick[b]]);
        tree.nodes[0].children.push_back(child);
      }
      out.push_back(std::move(tree));
      size_t b = 0;
      while (b < pick.size() && ++pick[b] == choices[b].size()) pick[b++] = 0;
      if (b == pick.size()) break;
    }
  });
  return out;
}

}  // namespace

void for_each_tree(int n, const std::function<void(const LeafLabeledTree&)>& visit, int n_max) {
  require(n >= 1, ErrorCode::invalid_argument, "order must be >= 1");
  require(n <= n_max, ErrorCode::size,
          "tree enumeration capped at n = " + std::to_string(n_max));
  if (n == 1) {
    visit(make_leaf(1));
    return;
  }
  std::vector<int> leaves(n);
  for (int i = 0; i < n; ++i) leaves[i] = i + 1;
  // Stream by top-level partition to keep only block-local materialization.
  for_each_partition(leaves, [&](const std::vector<std::vector<int>>& blocks) {
    std::vector<std::vector<LeafLabeledTree>> choices;
    choices.reserve(blocks.size());
    for (const auto& block : blocks) choices.push_back(trees_on(block));
    std::vector<size_t> pick(blocks.size(), 0);
    for (;;) {
      LeafLabeledTree tree;
      tree.nodes.push_back({0, {}});
      for (size_t b = 0; b < blocks.size(); ++b) {
        const int child = graft(tree, choices[b][pick[b]]);
        tree.nodes[0].children.push_back(child);
      }
      visit(tree);
      size_t b = 0;
      while (b < pick.size() && ++pick[b] == choices[b].size()) pick[b++] = 0;
      if (b == pick.size()) break;
    }
  });
}

std::vector<LeafLabeledTree> enumerate_trees(int n, int n_max) {
  std::vector<LeafLabeledTree> out;
  for_each_tree(n, [&](const LeafLabeledTree& t) { out.push_back(t); }, n_max);
  std::sort(out.begin(), out.end(), [](const LeafLabeledTree& a, const LeafLabeledTree& b) {
    return a.encode() < b.encode();
  });
  return out;
}

mpz_class count_trees(int n) {
  require(n >= 1, ErrorCode::invalid_argument, "order must be >= 1");
  static std::mutex mutex;
  static std::vector<mpz_class> cache{0, 1};  // cache[k] for k >= 1
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<int>(cache.size()) <= n) {
    const int k = static_cast<int>(cache.size());
    mpz_class total = 0;
    // integer partitions of k with >= 2 parts, tracked as (size, count) runs
    std::vector<std::pair<int, int>> runs;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
      if (remaining == 0) {
        int parts = 0;
        for (auto [sz, cnt] : runs) parts += cnt;
        if (parts < 2) return;
        // number of set partitions with this size profile, times the tree
        // choices per block
        mpz_class ways;
        mpz_fac_ui(ways.get_mpz_t(), k);
        for (auto [sz, cnt] : runs) {
          mpz_class szf, cntf;
          mpz_fac_ui(szf.get_mpz_t(), sz);
          mpz_fac_ui(cntf.get_mpz_t(), cnt);
          mpz_class denom;
          mpz_pow_ui(denom.get_mpz_t(), szf.get_mpz_t(), cnt);
          ways /= denom * cntf;
          mpz_class choice;
          mpz_pow_ui(choice.get_mpz_t(), cache[sz].get_mpz_t(), cnt);
          ways *= choice;
        }
        total += ways;
        return;
      }
      for (int part = std::min(remaining, max_part); part >= 1; --part) {
        int take = 1;
        int left = remaining - part;
        for (; left >= 0; ++take, left -= part) {
          runs.emplace_back(part, take);
          rec(left, part - 1);
          runs.pop_back();
        }
      }
    };
    rec(k, k);
    cache.push_back(total);
  }
  return cache[n];
}

namespace {

int canonical_copy(const LeafLabeledTree& src, int id, LeafLabeledTree& dst,
                   std::vector<int>& min_leaf) {
  const auto& node = src.nodes[id];
  const int out = static_cast<int>(dst.nodes.size());
  dst.nodes.push_back({node.label, {}});
  if (node.children.empty()) {
    min_leaf[out] = node.label;
    return out;
  }
  std::vector<std::pair<int, int>> ordered;  // (min leaf, new child id)
  for (int child : node.children) {
    const int nid = canonical_copy(src, child, dst, min_leaf);
    ordered.emplace_back(min_leaf[nid], nid);
  }
  std::sort(ordered.begin(), ordered.end());
  min_leaf[out] = ordered.front().first;
  for (auto& [ml, nid] : ordered) dst.nodes[out].children.push_back(nid);
  return out;
}

// renumber pre-order so equal shapes produce identical node arrays
LeafLabeledTree renumber(const LeafLabeledTree& t) {
  LeafLabeledTree out;
  std::function<int(int)> rec = [&](int id) -> int {
    const int nid = static_cast<int>(out.nodes.size());
    out.nodes.push_back({t.nodes[id].label, {}});
    for (int child : t.nodes[id].children) {
      const int mapped = rec(child);
      out.nodes[nid].children.push_back(mapped);
    }
    return nid;
  };
  rec(0);
  return out;
}

}  // namespace

LeafLabeledTree canonical_form(const LeafLabeledTree& tree) {
  require(!tree.nodes.empty(), ErrorCode::malformed_tree, "empty tree");
  // structural validation: single-rooted, every node reached exactly once
  std::vector<int> seen(tree.nodes.size(), 0);
  std::vector<int> labels;
  std::function<void(int)> check = [&](int id) {
    require(id >= 0 && id < static_cast<int>(tree.nodes.size()), ErrorCode::malformed_tree,
            "child index out of range");
    require(!seen[id]++, ErrorCode::malformed_tree, "node referenced twice");
    const auto& node = tree.nodes[id];
    if (node.children.empty()) {
      require(node.label >= 1, ErrorCode::malformed_tree, "leaf without a label");
      labels.push_back(node.label);
      return;
    }
    require(node.label == 0, ErrorCode::malformed_tree, "internal node with a leaf label");
    require(node.children.size() >= 2, ErrorCode::malformed_tree,
            "internal node with out-degree < 2");
    for (int child : node.children) check(child);
  };
  check(0);
  require(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(tree.nodes.size()),
          ErrorCode::malformed_tree, "unreachable nodes present");
  std::sort(labels.begin(), labels.end());
  for (size_t i = 0; i < labels.size(); ++i)
    require(labels[i] == static_cast<int>(i) + 1, ErrorCode::malformed_tree,
            "leaf labels must be exactly 1..n");

  LeafLabeledTree sorted;
  std::vector<int> min_leaf(tree.nodes.size() + 1, 0);
  sorted.nodes.reserve(tree.nodes.size());
  canonical_copy(tree, 0, sorted, min_leaf);
  return renumber(sorted);
}

}  // namespace hawkes
