#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "errors.hpp"
#include "trees.hpp"

using namespace hawkes;

TEST_SUITE_BEGIN("trees");

// Schroeder's fourth problem: 1, 1, 4, 26, 236, 2752, 39208, 660032, ...
static const long kCounts[] = {0,    1,       1,        4,         26,       236,
                               2752, 39208,   660032,   12818912,  282137824};

TEST_CASE("count_trees matches the classical sequence") {
  for (int n = 1; n <= 10; ++n) CHECK(count_trees(n) == mpz_class(kCounts[n]));
  CHECK(count_trees(12) == mpz_class("188666182784"));
  // stays exact far beyond 64 bits
  CHECK(count_trees(20) > mpz_class("18446744073709551615"));
}

TEST_CASE("enumeration for small orders") {
  CHECK(enumerate_trees(1).size() == 1);
  CHECK(enumerate_trees(1)[0].encode() == "1");

  const auto two = enumerate_trees(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].encode() == "(1,2)");

  const auto three = enumerate_trees(3);
  REQUIRE(three.size() == 4);
  std::set<std::string> enc;
  for (const auto& t : three) enc.insert(t.encode());
  CHECK(enc == std::set<std::string>{"(1,2,3)", "(1,(2,3))", "((1,2),3)", "((1,3),2)"});

  CHECK(enumerate_trees(4).size() == 26);
}

TEST_CASE("enumeration length equals the recurrence count") {
  for (int n = 1; n <= 6; ++n)
    CHECK(mpz_class(static_cast<long>(enumerate_trees(n).size())) == count_trees(n));
  for (int n = 7; n <= 8; ++n) {
    long seen = 0;
    for_each_tree(n, [&](const LeafLabeledTree&) { ++seen; });
    CHECK(count_trees(n) == mpz_class(seen));
  }
}

TEST_CASE("enumerated trees are canonical, valid and pairwise distinct") {
  for (int n = 2; n <= 6; ++n) {
    std::set<std::string> seen;
    int leaves_expected = n;
    for (const auto& t : enumerate_trees(n)) {
      CHECK(t.leaf_count() == leaves_expected);
      const auto canon = canonical_form(t);  // validates structure
      CHECK(canon.encode() == t.encode());
      CHECK(seen.insert(t.encode()).second);
    }
  }
}

TEST_CASE("canonical form is idempotent and order-insensitive") {
  LeafLabeledTree leaf;
  leaf.nodes.push_back({1, {}});
  CHECK(canonical_form(leaf).encode() == "1");

  LeafLabeledTree star;  // children listed (3,1,2)
  star.nodes.push_back({0, {1, 2, 3}});
  star.nodes.push_back({3, {}});
  star.nodes.push_back({1, {}});
  star.nodes.push_back({2, {}});
  CHECK(canonical_form(star).encode() == "(1,2,3)");

  // the two listing orders of the caterpillar with inner pair {2,3}
  LeafLabeledTree cat_a, cat_b;
  cat_a.nodes.push_back({0, {1, 2}});
  cat_a.nodes.push_back({1, {}});
  cat_a.nodes.push_back({0, {3, 4}});
  cat_a.nodes.push_back({2, {}});
  cat_a.nodes.push_back({3, {}});
  cat_b.nodes.push_back({0, {1, 2}});
  cat_b.nodes.push_back({0, {3, 4}});
  cat_b.nodes.push_back({1, {}});
  cat_b.nodes.push_back({3, {}});
  cat_b.nodes.push_back({2, {}});
  CHECK(canonical_form(cat_a).encode() == canonical_form(cat_b).encode());
  CHECK(canonical_form(cat_a).encode() == "(1,(2,3))");
}

TEST_CASE("malformed trees are rejected") {
  LeafLabeledTree chain;  // internal node with a single child
  chain.nodes.push_back({0, {1}});
  chain.nodes.push_back({1, {}});
  CHECK_THROWS_AS(canonical_form(chain), Error);

  LeafLabeledTree dup;  // duplicate leaf label
  dup.nodes.push_back({0, {1, 2}});
  dup.nodes.push_back({1, {}});
  dup.nodes.push_back({1, {}});
  CHECK_THROWS_AS(canonical_form(dup), Error);

  LeafLabeledTree gap;  // labels {1, 3}
  gap.nodes.push_back({0, {1, 2}});
  gap.nodes.push_back({1, {}});
  gap.nodes.push_back({3, {}});
  CHECK_THROWS_AS(canonical_form(gap), Error);
}

TEST_CASE("leaf relabeling permutes the enumerated set onto itself") {
  std::mt19937_64 rng(5);
  const int n = 5;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  std::shuffle(perm.begin(), perm.end(), rng);

  std::set<std::string> original, relabeled;
  for (const auto& t : enumerate_trees(n)) {
    original.insert(t.encode());
    LeafLabeledTree copy = t;
    for (auto& node : copy.nodes)
      if (node.children.empty()) node.label = perm[node.label - 1];
    relabeled.insert(canonical_form(copy).encode());
  }
  CHECK(original == relabeled);
}

TEST_CASE("bounds") {
  CHECK_THROWS_AS(enumerate_trees(9), Error);         // beyond default cap
  CHECK_THROWS_AS(enumerate_trees(0), Error);
  try {
    enumerate_trees(9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::size);
  }
}

TEST_CASE("deterministic streaming order") {
  std::vector<std::string> a, b;
  for_each_tree(5, [&](const LeafLabeledTree& t) { a.push_back(t.encode()); });
  for_each_tree(5, [&](const LeafLabeledTree& t) { b.push_back(t.encode()); });
  CHECK(a == b);
}

TEST_SUITE_END();
