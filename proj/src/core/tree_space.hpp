#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uwave {

/// Identifies one ball (vertex) of a BallTree. Ids are dense, 0..size()-1.
struct BallId {
  std::uint32_t value = 0;
  friend auto operator<=>(BallId, BallId) = default;
};

/// One vertex of an explicitly described tree. `parent` is empty for the root.
struct VertexSpec {
  std::uint32_t id = 0;
  std::optional<std::uint32_t> parent;
  double measure = 0.0;
  double diameter = 0.0;
};

/// Relative tolerance used when checking measure additivity.
inline constexpr double kAdditivityTolerance = 1e-12;

/// Finite directed tree of balls with a measure and a diameter on every
/// vertex. Points of the space are the leaves. Immutable after construction.
///
/// Invariants enforced by the factories:
///  - a single root, every vertex reachable from it;
///  - every non-leaf has at least two maximal subballs (children);
///  - diameters strictly decrease from parent to child;
///  - measures are finite, non-negative and additive over children.
class BallTree {
 public:
  /// Builds from a full vertex list; measures must already be additive.
  static BallTree from_vertices(std::span<const VertexSpec> vertices);

  /// Builds from parent links and diameters, taking measures from the leaves
  /// only. Interior measures are recomputed as sums over children.
  /// `leaf_measures` is indexed by vertex id; entries at interior ids are
  /// ignored.
  static BallTree from_leaf_measures(
      std::span<const std::optional<std::uint32_t>> parents,
      std::span<const double> diameters, std::span<const double> leaf_measures);

  BallId root() const { return root_; }
  std::size_t size() const { return parent_.size(); }

  bool valid(BallId b) const { return b.value < parent_.size(); }
  /// Throws Errc::Identity when `b` does not belong to this tree.
  void check(BallId b) const;

  std::optional<BallId> parent(BallId b) const;
  std::span<const BallId> children(BallId b) const;
  bool is_leaf(BallId b) const { return children(b).empty(); }
  double measure(BallId b) const;
  double diameter(BallId b) const;
  int level(BallId b) const;
  int height() const { return height_; }

  /// True iff `inner` is a descendant of `outer` or equal to it.
  bool contains(BallId outer, BallId inner) const;

  /// Maximal subball of `ancestor` that contains `descendant`.
  /// Requires `descendant` strictly inside `ancestor`.
  BallId child_toward(BallId ancestor, BallId descendant) const;

  /// Leaves in depth-first order (children visited in stored order).
  std::span<const BallId> leaves() const { return leaves_; }
  /// Position of a leaf inside leaves().
  std::size_t leaf_index(BallId leaf) const;
  /// Non-leaf balls in increasing id order.
  std::span<const BallId> interior() const { return interior_; }

  double total_measure() const { return measure(root_); }
  /// Balls of measure zero are permitted but reported by this query.
  std::vector<BallId> zero_measure_balls() const;

  /// Set only for trees built by build_padic_tree.
  std::optional<int> padic_base() const { return padic_base_; }

 private:
  friend BallTree build_padic_tree(int p, int depth);

  BallTree() = default;
  void finalize();

  BallId root_{};
  std::vector<std::int64_t> parent_;
  std::vector<std::vector<BallId>> children_;
  std::vector<double> measure_;
  std::vector<double> diameter_;
  std::vector<int> level_;
  std::vector<std::uint32_t> enter_;
  std::vector<std::uint32_t> exit_;
  std::vector<std::size_t> leaf_pos_;
  std::vector<BallId> leaves_;
  std::vector<BallId> interior_;
  int height_ = 0;
  std::optional<int> padic_base_;
};

/// Unit ball of Z_p truncated at scale p^-depth: a full p-ary tree whose
/// level-k balls have measure and diameter p^-k; children ordered by digit.
BallTree build_padic_tree(int p, int depth);

/// Smallest ball containing both arguments (a ball contains itself).
BallId sup(const BallTree& tree, BallId a, BallId b);

std::span<const BallId> maximal_subballs(const BallTree& tree, BallId ball);
std::size_t branching_index(const BallTree& tree, BallId ball);

/// A leaf of the tree, i.e. a point of the space.
struct Point {
  BallId leaf;
};

/// Throws Errc::Domain if `b` is not a leaf.
Point make_point(const BallTree& tree, BallId b);

struct SubtreeViolation {
  int condition = 0;  // 1: sup-closure, 2: interval-closure, 3: sibling-closure
  std::vector<BallId> witness;
  std::string message;
};

struct SubtreeReport {
  std::vector<SubtreeViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the three closure conditions of a regular subtree and reports the
/// first witness found for every violated condition.
SubtreeReport validate_regular_subtree(const BallTree& tree,
                                       std::span<const BallId> members);

/// Validated set of balls closed under sup, intervals and siblings.
/// Holds a reference to its host tree, which must outlive it.
class RegularSubtree {
 public:
  /// Throws Errc::Domain listing the violations if `members` is not regular.
  RegularSubtree(const BallTree& host, std::span<const BallId> members);

  static RegularSubtree full(const BallTree& host);

  const BallTree& host() const { return *host_; }
  bool contains(BallId b) const;
  std::span<const BallId> members() const { return members_; }
  /// Largest member; every other member lies inside it.
  BallId top() const { return top_; }
  /// Members with no member children, in depth-first order.
  std::span<const BallId> minimal() const { return minimal_; }
  /// Members whose children are members, in increasing id order.
  std::span<const BallId> non_minimal() const { return non_minimal_; }

 private:
  const BallTree* host_;
  std::vector<BallId> members_;
  std::vector<bool> in_;
  BallId top_{};
  std::vector<BallId> minimal_;
  std::vector<BallId> non_minimal_;
};

}  // namespace uwave
