#include "wpg/tree.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "wpg/error.hpp"

namespace wpg {

namespace {

void check_order(int k) {
  if (k < 1 || k > 62) {
    throw InvalidArgument("tree order k must lie in 1..62, got " + std::to_string(k));
  }
}

void check_generator(int k, int generator) {
  if (generator < 1 || generator > k + 1) {
    throw InvalidArgument("generator index " + std::to_string(generator) +
                          " outside 1.." + std::to_string(k + 1));
  }
}

}  // namespace

TreeWord::TreeWord(int k) : k_(k) { check_order(k); }

TreeWord::TreeWord(int k, std::vector<int> letters) : k_(k), letters_(std::move(letters)) {
  check_order(k);
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    check_generator(k, letters_[i]);
    if (i > 0 && letters_[i] == letters_[i - 1]) {
      throw InvalidArgument("word is not reduced: repeated adjacent letter a" +
                            std::to_string(letters_[i]));
    }
  }
}

int TreeWord::last_letter() const {
  if (letters_.empty()) throw RootHasNoParent();
  return letters_.back();
}

TreeWord TreeWord::inverse() const {
  TreeWord w(k_);
  w.letters_.assign(letters_.rbegin(), letters_.rend());
  return w;
}

std::string TreeWord::to_string() const {
  if (letters_.empty()) return "e";
  std::ostringstream os;
  for (int l : letters_) os << 'a' << l;
  return os.str();
}

std::strong_ordering operator<=>(const TreeWord& a, const TreeWord& b) {
  if (auto c = a.k_ <=> b.k_; c != 0) return c;
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

TreeWord word_multiply(const TreeWord& x, const TreeWord& y) {
  if (x.order() != y.order()) {
    throw InvalidArgument("word_multiply: operands belong to trees of different order");
  }
  // Free reduction: each generator is an involution, so a cancellation only
  // happens at the junction and propagates inward.
  std::vector<int> out = x.letters();
  for (int l : y.letters()) {
    if (!out.empty() && out.back() == l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return TreeWord(x.order(), std::move(out));
}

int omega_count(const TreeWord& x, int generator) {
  check_generator(x.order(), generator);
  return static_cast<int>(std::count(x.letters().begin(), x.letters().end(), generator));
}

SubgroupSpec::SubgroupSpec(int k, std::vector<int> members) : k_(k), members_(std::move(members)) {
  check_order(k);
  if (members_.empty()) throw InvalidArgument("subgroup index set A must be non-empty");
  std::sort(members_.begin(), members_.end());
  for (int m : members_) {
    check_generator(k, m);
    const std::uint64_t bit = std::uint64_t{1} << m;
    if (mask_ & bit) throw InvalidArgument("duplicate generator in A: " + std::to_string(m));
    mask_ |= bit;
  }
}

bool SubgroupSpec::contains(int generator) const {
  return generator >= 1 && generator <= k_ + 1 && (mask_ >> generator) & 1U;
}

SubgroupSpec SubgroupSpec::leading(int k, int m) {
  if (m < 1 || m > k + 1) {
    throw InvalidArgument("|A| must lie in 1..k+1, got " + std::to_string(m));
  }
  std::vector<int> a(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i)] = i + 1;
  return SubgroupSpec(k, std::move(a));
}

Coset coset(const TreeWord& x, const SubgroupSpec& sub) {
  if (x.order() != sub.order()) {
    throw InvalidArgument("coset: word and subgroup belong to trees of different order");
  }
  int parity = 0;
  for (int l : x.letters()) parity ^= sub.contains(l) ? 1 : 0;
  return parity == 0 ? Coset::in_subgroup : Coset::in_complement;
}

TreeWord parent(const TreeWord& x) {
  if (x.is_root()) throw RootHasNoParent();
  std::vector<int> letters = x.letters();
  letters.pop_back();
  return TreeWord(x.order(), std::move(letters));
}

std::vector<TreeWord> successors(const TreeWord& x) {
  const int k = x.order();
  const int last = x.is_root() ? 0 : x.letters().back();
  std::vector<TreeWord> out;
  out.reserve(static_cast<std::size_t>(x.is_root() ? k + 1 : k));
  for (int j = 1; j <= k + 1; ++j) {
    if (j == last) continue;
    std::vector<int> letters = x.letters();
    letters.push_back(j);
    out.emplace_back(k, std::move(letters));
  }
  return out;
}

FieldIndex field_index(const TreeWord& x, const SubgroupSpec& sub) {
  if (x.is_root()) {
    throw InvalidArgument("field_index: the root has no parent and no weakly periodic index");
  }
  const bool self_in = coset(x, sub) == Coset::in_subgroup;
  // x and its parent differ by the last letter only.
  const bool parent_in = self_in != sub.contains(x.letters().back());
  if (self_in) return parent_in ? FieldIndex::h1 : FieldIndex::h2;
  return parent_in ? FieldIndex::h3 : FieldIndex::h4;
}

std::size_t ball_size(int n, int k) {
  if (n < 0) throw InvalidArgument("ball level n must be non-negative");
  check_order(k);
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  std::size_t shell = 1;
  for (int m = 1; m <= n; ++m) {
    const std::size_t factor = static_cast<std::size_t>(m == 1 ? k + 1 : k);
    if (shell > kMax / factor) return kMax;
    shell *= factor;
    if (total > kMax - shell) return kMax;
    total += shell;
  }
  return total;
}

Ball enumerate_ball(int n, int k, std::size_t cap) {
  const std::size_t size = ball_size(n, k);
  if (size > cap) {
    throw CapExceeded("ball V_" + std::to_string(n) + " for k=" + std::to_string(k) +
                      " has more than " + std::to_string(cap) + " vertices");
  }
  Ball ball;
  ball.n = n;
  ball.k = k;
  ball.vertices.reserve(size);
  ball.vertices.push_back(TreeWord::root(k));
  std::size_t shell_begin = 0;
  std::size_t shell_end = 1;
  for (int m = 1; m <= n; ++m) {
    for (std::size_t i = shell_begin; i < shell_end; ++i) {
      for (TreeWord& y : successors(ball.vertices[i])) {
        ball.edges.emplace_back(i, ball.vertices.size());
        ball.vertices.push_back(std::move(y));
      }
    }
    shell_begin = shell_end;
    shell_end = ball.vertices.size();
  }
  ball.boundary_offset = shell_begin;
  ball.boundary.assign(ball.vertices.begin() + static_cast<std::ptrdiff_t>(shell_begin),
                       ball.vertices.end());
  return ball;
}

std::size_t Ball::index_of(const TreeWord& x) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), x);
  if (it == vertices.end() || !(*it == x)) {
    throw InvalidArgument("vertex " + x.to_string() + " is not in V_" + std::to_string(n));
  }
  return static_cast<std::size_t>(it - vertices.begin());
}

}  // namespace wpg
