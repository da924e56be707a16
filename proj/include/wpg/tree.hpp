#pragma once

// Vertices of the Cayley tree of order k as reduced words in the free product
// of k+1 copies of Z/2, cosets of the index-two normal subgroups H_A, and the
// weakly periodic field assignment.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wpg {

class TreeWord {
 public:
  // The root x0 (empty word).
  explicit TreeWord(int k);
  // Throws InvalidArgument unless every letter is in 1..k+1 and no two
  // adjacent letters coincide.
  TreeWord(int k, std::vector<int> letters);

  static TreeWord root(int k) { return TreeWord(k); }

  int order() const { return k_; }
  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_root() const { return letters_.empty(); }
  int last_letter() const;

  // Same letters reversed; x * x.inverse() is the root.
  TreeWord inverse() const;

  std::string to_string() const;

  // Shortlex: by length, then letters lexicographically. Restricted to one k
  // this is breadth-first order.
  friend std::strong_ordering operator<=>(const TreeWord& a, const TreeWord& b);
  friend bool operator==(const TreeWord& a, const TreeWord& b) = default;

 private:
  int k_;
  std::vector<int> letters_;
};

TreeWord word_multiply(const TreeWord& x, const TreeWord& y);

// Number of occurrences of generator a_i in the reduced word.
int omega_count(const TreeWord& x, int generator);

class SubgroupSpec {
 public:
  // A must be a non-empty subset of {1, ..., k+1}; duplicates are rejected.
  SubgroupSpec(int k, std::vector<int> members);

  int order() const { return k_; }
  const std::vector<int>& members() const { return members_; }
  int cardinality() const { return static_cast<int>(members_.size()); }
  bool contains(int generator) const;
  // |A| = k+1: weak periodicity reduces to ordinary periodicity.
  bool is_full() const { return cardinality() == k_ + 1; }

  // A = {1, ..., m}.
  static SubgroupSpec leading(int k, int m);

 private:
  int k_;
  std::vector<int> members_;
  std::uint64_t mask_ = 0;
};

enum class Coset { in_subgroup, in_complement };

Coset coset(const TreeWord& x, const SubgroupSpec& sub);

// Drops the last letter. Throws RootHasNoParent for the root.
TreeWord parent(const TreeWord& x);

// Direct successors in lexicographic order: k+1 words for the root, k
// otherwise.
std::vector<TreeWord> successors(const TreeWord& x);

// Which of h1..h4 applies at x, keyed on (coset of x, coset of its parent):
//   h1: (H_A, H_A)   h2: (H_A, complement)
//   h3: (complement, H_A)   h4: (complement, complement)
enum class FieldIndex : int { h1 = 1, h2 = 2, h3 = 3, h4 = 4 };

constexpr int to_int(FieldIndex i) { return static_cast<int>(i); }

// Throws InvalidArgument for the root, whose field comes from the recursion
// over its k+1 successors instead.
FieldIndex field_index(const TreeWord& x, const SubgroupSpec& sub);

inline constexpr std::size_t kDefaultVertexCap = std::size_t{1} << 22;

// Number of vertices of the ball V_n; saturates at SIZE_MAX.
std::size_t ball_size(int n, int k);

struct Ball {
  int n = 0;
  int k = 0;
  std::vector<TreeWord> vertices;  // V_n in shortlex order
  std::vector<TreeWord> boundary;  // W_n in shortlex order
  // Edges of L_n as (parent index, child index) into `vertices`.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // Position of the first boundary vertex inside `vertices`.
  std::size_t boundary_offset = 0;

  // Index of x in `vertices`; throws InvalidArgument when x is outside V_n.
  std::size_t index_of(const TreeWord& x) const;
};

// Throws CapExceeded when |V_n| > cap.
Ball enumerate_ball(int n, int k, std::size_t cap = kDefaultVertexCap);

}  // namespace wpg
