#include <map>
#include <random>
#include <set>
#include <utility>

#include "doctest.h"
#include "wpg/error.hpp"
#include "wpg/tree.hpp"

using namespace wpg;

namespace {

TreeWord w(int k, std::vector<int> letters) { return TreeWord(k, std::move(letters)); }

TreeWord random_word(int k, int max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> letter(1, k + 1);
  std::vector<int> out;
  int n = len(rng);
  while (static_cast<int>(out.size()) < n) {
    int a = letter(rng);
    if (!out.empty() && out.back() == a) continue;
    out.push_back(a);
  }
  return TreeWord(k, out);
}

bool parity(const TreeWord& x, const SubgroupSpec& sub) { return coset(x, sub) == Coset::in_complement; }

}  // namespace

TEST_CASE("words are validated on construction") {
  CHECK_THROWS_AS(w(2, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(w(2, {0}), InvalidArgument);
  CHECK_THROWS_AS(w(2, {4}), InvalidArgument);
  CHECK_THROWS_AS(TreeWord(0), InvalidArgument);
  CHECK(TreeWord(3).is_root());
  CHECK(TreeWord(3).to_string() == "e");
  CHECK(w(3, {1, 4, 2}).to_string() == "a1a4a2");
}

TEST_CASE("word_multiply") {
  const int k = 3;
  CHECK(word_multiply(w(k, {1, 2}), w(k, {2, 1})).is_root());
  CHECK(word_multiply(w(k, {1, 3, 2}), TreeWord(k)) == w(k, {1, 3, 2}));
  CHECK(word_multiply(TreeWord(k), w(k, {4})) == w(k, {4}));
  CHECK(word_multiply(w(k, {1}), w(k, {1})).is_root());
  CHECK(word_multiply(w(k, {1, 2, 3}), w(k, {3, 2, 4})) == w(k, {1, 4}));
  CHECK_THROWS_AS(word_multiply(w(2, {1}), w(3, {1})), InvalidArgument);
}

TEST_CASE("products are reduced and x times its reverse is the root") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    int k = 1 + trial % 5;
    TreeWord x = random_word(k, 8, rng);
    TreeWord y = random_word(k, 8, rng);
    TreeWord p = word_multiply(x, y);
    const auto& l = p.letters();
    for (std::size_t i = 1; i < l.size(); ++i) REQUIRE(l[i] != l[i - 1]);
    CHECK(word_multiply(x, x.inverse()).is_root());
  }
}

TEST_CASE("omega_count") {
  CHECK(omega_count(w(2, {1, 2, 1}), 1) == 2);
  CHECK(omega_count(TreeWord(2), 3) == 0);
  CHECK(omega_count(w(3, {3, 1, 3, 2}), 3) == 2);
  CHECK_THROWS_AS(omega_count(w(2, {1}), 4), InvalidArgument);
  CHECK_THROWS_AS(omega_count(w(2, {1}), 0), InvalidArgument);
}

TEST_CASE("SubgroupSpec") {
  CHECK_THROWS_AS(SubgroupSpec(3, {}), InvalidArgument);
  CHECK_THROWS_AS(SubgroupSpec(3, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(SubgroupSpec(3, {5}), InvalidArgument);
  SubgroupSpec s(3, {4, 2});
  CHECK(s.members() == std::vector<int>{2, 4});
  CHECK(s.contains(4));
  CHECK_FALSE(s.contains(1));
  CHECK_FALSE(s.is_full());
  CHECK(SubgroupSpec(3, {1, 2, 3, 4}).is_full());
  CHECK(SubgroupSpec::leading(5, 3).members() == std::vector<int>{1, 2, 3});
}

TEST_CASE("coset") {
  SubgroupSpec sub(3, {1, 3});
  CHECK(coset(TreeWord(3), sub) == Coset::in_subgroup);
  CHECK(coset(w(3, {1}), sub) == Coset::in_complement);
  CHECK(coset(w(3, {2}), sub) == Coset::in_subgroup);
  CHECK(coset(w(3, {1, 2, 3}), sub) == Coset::in_subgroup);
  CHECK(coset(w(3, {1, 2, 3, 4, 1}), sub) == Coset::in_complement);
}

TEST_CASE("coset parity is a homomorphism onto Z/2") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    int k = 2 + trial % 4;
    std::vector<int> members;
    for (int i = 1; i <= k + 1; ++i)
      if (rng() & 1) members.push_back(i);
    if (members.empty()) members.push_back(1);
    SubgroupSpec sub(k, members);
    TreeWord x = random_word(k, 7, rng);
    TreeWord y = random_word(k, 7, rng);
    CHECK(parity(word_multiply(x, y), sub) == (parity(x, sub) != parity(y, sub)));
  }
}

TEST_CASE("parent") {
  CHECK(parent(w(2, {1, 2})) == w(2, {1}));
  CHECK(parent(w(2, {3})).is_root());
  CHECK_THROWS_AS(parent(TreeWord(2)), RootHasNoParent);
}

TEST_CASE("successors") {
  CHECK(successors(TreeWord(2)) == std::vector<TreeWord>{w(2, {1}), w(2, {2}), w(2, {3})});
  CHECK(successors(w(2, {1})) == std::vector<TreeWord>{w(2, {1, 2}), w(2, {1, 3})});
  CHECK(successors(w(5, {2, 6, 1})).size() == 5);
  for (const auto& y : successors(w(4, {3, 1}))) CHECK(parent(y) == w(4, {3, 1}));
}

TEST_CASE("field_index") {
  SubgroupSpec sub(3, {1, 2});
  CHECK(field_index(w(3, {1}), sub) == FieldIndex::h3);
  CHECK(field_index(w(3, {1, 2}), sub) == FieldIndex::h2);
  CHECK(field_index(w(3, {3}), sub) == FieldIndex::h1);
  CHECK(field_index(w(3, {1, 3}), sub) == FieldIndex::h4);
  CHECK_THROWS_AS(field_index(TreeWord(3), sub), InvalidArgument);
}

TEST_CASE("field_index is constant on each coset-pair class") {
  for (int k = 1; k <= 3; ++k) {
    Ball ball = enumerate_ball(4, k);
    for (int m = 1; m <= k + 1; ++m) {
      SubgroupSpec sub = SubgroupSpec::leading(k, m);
      std::map<std::pair<Coset, Coset>, std::set<FieldIndex>> seen;
      for (const auto& x : ball.vertices) {
        if (x.is_root()) continue;
        seen[{coset(x, sub), coset(parent(x), sub)}].insert(field_index(x, sub));
      }
      for (const auto& [cls, idx] : seen) {
        REQUIRE(idx.size() == 1);
        bool x_in = cls.first == Coset::in_subgroup;
        bool p_in = cls.second == Coset::in_subgroup;
        FieldIndex want = x_in ? (p_in ? FieldIndex::h1 : FieldIndex::h2)
                               : (p_in ? FieldIndex::h3 : FieldIndex::h4);
        CHECK(*idx.begin() == want);
      }
    }
  }
}

TEST_CASE("enumerate_ball sizes") {
  Ball b = enumerate_ball(1, 2);
  CHECK(b.boundary.size() == 3);
  CHECK(b.vertices.size() == 4);
  CHECK(b.edges.size() == 3);
  b = enumerate_ball(2, 2);
  CHECK(b.boundary.size() == 6);
  CHECK(b.vertices.size() == 10);
  b = enumerate_ball(1, 5);
  CHECK(b.boundary.size() == 6);
  CHECK(b.vertices.size() == 7);
  b = enumerate_ball(0, 4);
  CHECK(b.boundary.size() == 1);
  CHECK(b.edges.empty());
  CHECK(ball_size(3, 2) == 22);
  CHECK_THROWS_AS(enumerate_ball(3, 2, 21), CapExceeded);
  CHECK_THROWS_AS(enumerate_ball(-1, 2), InvalidArgument);
}

TEST_CASE("ball structure") {
  for (int k = 1; k <= 4; ++k) {
    for (int n = 0; n <= 4; ++n) {
      Ball b = enumerate_ball(n, k);
      std::size_t expect = n == 0 ? 1 : static_cast<std::size_t>(k + 1);
      for (int i = 1; i < n; ++i) expect *= static_cast<std::size_t>(k);
      CHECK(b.boundary.size() == expect);
      CHECK(b.vertices.size() == ball_size(n, k));
      CHECK(b.edges.size() + 1 == b.vertices.size());
      for (std::size_t i = 1; i < b.vertices.size(); ++i) CHECK(b.vertices[i - 1] < b.vertices[i]);
      for (const auto& [p, c] : b.edges) {
        CHECK(parent(b.vertices[c]) == b.vertices[p]);
        CHECK(b.vertices[p].length() + 1 == b.vertices[c].length());
      }
      for (const auto& x : b.vertices) {
        auto s = successors(x);
        CHECK(s.size() == static_cast<std::size_t>(x.is_root() ? k + 1 : k));
        if (static_cast<int>(x.length()) < n)
          for (const auto& y : s) CHECK(b.index_of(y) > b.index_of(x));
      }
      for (std::size_t i = 0; i < b.boundary.size(); ++i)
        CHECK(b.vertices[b.boundary_offset + i] == b.boundary[i]);
      std::vector<int> deep;
      for (int i = 0; i <= n; ++i) deep.push_back(1 + i % 2);
      CHECK_THROWS_AS(b.index_of(TreeWord(k, deep)), InvalidArgument);
    }
  }
}
