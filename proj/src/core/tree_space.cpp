#include "core/tree_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace uwave {

namespace {

std::string ball_name(BallId b) { return "ball " + std::to_string(b.value); }

bool additive(double whole, double parts) {
  const double scale = std::max(std::abs(whole), std::abs(parts));
  return std::abs(whole - parts) <= kAdditivityTolerance * scale;
}

}  // namespace

void BallTree::check(BallId b) const {
  if (!valid(b)) {
    fail(Errc::Identity, ball_name(b) + " does not belong to this tree (size " +
                             std::to_string(size()) + ")");
  }
}

std::optional<BallId> BallTree::parent(BallId b) const {
  check(b);
  const auto p = parent_[b.value];
  if (p < 0) return std::nullopt;
  return BallId{static_cast<std::uint32_t>(p)};
}

std::span<const BallId> BallTree::children(BallId b) const {
  check(b);
  return children_[b.value];
}

double BallTree::measure(BallId b) const {
  check(b);
  return measure_[b.value];
}

double BallTree::diameter(BallId b) const {
  check(b);
  return diameter_[b.value];
}

int BallTree::level(BallId b) const {
  check(b);
  return level_[b.value];
}

bool BallTree::contains(BallId outer, BallId inner) const {
  check(outer);
  check(inner);
  return enter_[outer.value] <= enter_[inner.value] &&
         exit_[inner.value] <= exit_[outer.value];
}

BallId BallTree::child_toward(BallId ancestor, BallId descendant) const {
  if (ancestor == descendant || !contains(ancestor, descendant)) {
    fail(Errc::Domain, ball_name(descendant) + " is not strictly inside " +
                           ball_name(ancestor));
  }
  BallId cur = descendant;
  while (parent_[cur.value] != static_cast<std::int64_t>(ancestor.value)) {
    cur = BallId{static_cast<std::uint32_t>(parent_[cur.value])};
  }
  return cur;
}

std::size_t BallTree::leaf_index(BallId leaf) const {
  check(leaf);
  if (!is_leaf(leaf)) fail(Errc::Domain, ball_name(leaf) + " is not a leaf");
  return leaf_pos_[leaf.value];
}

std::vector<BallId> BallTree::zero_measure_balls() const {
  std::vector<BallId> out;
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (measure_[i] == 0.0) out.push_back(BallId{i});
  }
  return out;
}

// Computes levels, Euler-tour intervals, leaf order and the interior list,
// then checks the structural invariants that do not involve measures.
void BallTree::finalize() {
  const std::size_t n = parent_.size();
  level_.assign(n, -1);
  enter_.assign(n, 0);
  exit_.assign(n, 0);
  leaf_pos_.assign(n, 0);
  leaves_.clear();
  interior_.clear();
  height_ = 0;

  std::uint32_t clock = 0;
  std::size_t visited = 0;
  // Iterative DFS; the second pair member is the next child to visit.
  std::vector<std::pair<BallId, std::size_t>> stack{{root_, 0}};
  level_[root_.value] = 0;
  enter_[root_.value] = clock++;
  ++visited;
  while (!stack.empty()) {
    auto& [ball, next] = stack.back();
    const auto& kids = children_[ball.value];
    if (next < kids.size()) {
      const BallId child = kids[next++];
      if (level_[child.value] >= 0) {
        fail(Errc::Parameter, ball_name(child) + " is reachable twice");
      }
      level_[child.value] = level_[ball.value] + 1;
      height_ = std::max(height_, level_[child.value]);
      enter_[child.value] = clock++;
      ++visited;
      stack.emplace_back(child, 0);
    } else {
      if (kids.empty()) {
        leaf_pos_[ball.value] = leaves_.size();
        leaves_.push_back(ball);
      }
      exit_[ball.value] = clock++;
      stack.pop_back();
    }
  }
  if (visited != n) {
    fail(Errc::Parameter, "tree is not connected: " + std::to_string(n - visited) +
                              " balls are unreachable from the root");
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const BallId b{i};
    const auto& kids = children_[i];
    if (kids.size() == 1) {
      fail(Errc::Parameter, ball_name(b) + " has a single maximal subball");
    }
    if (!kids.empty()) interior_.push_back(b);
    if (!std::isfinite(diameter_[i]) || diameter_[i] < 0.0) {
      fail(Errc::Parameter, ball_name(b) + " has an invalid diameter");
    }
    for (BallId c : kids) {
      if (!(diameter_[c.value] < diameter_[i])) {
        fail(Errc::Parameter, ball_name(c) + " has diameter not smaller than its parent " +
                                  ball_name(b));
      }
    }
  }
}

BallTree BallTree::from_vertices(std::span<const VertexSpec> vertices) {
  const std::size_t n = vertices.size();
  if (n == 0) fail(Errc::Parameter, "a tree needs at least one ball");

  BallTree t;
  t.parent_.assign(n, -2);
  t.children_.assign(n, {});
  t.measure_.assign(n, 0.0);
  t.diameter_.assign(n, 0.0);

  std::optional<BallId> root;
  for (const auto& v : vertices) {
    if (v.id >= n) {
      fail(Errc::Parameter, "ball id " + std::to_string(v.id) + " out of range; ids must be 0.." +
                                std::to_string(n - 1));
    }
    if (t.parent_[v.id] != -2) fail(Errc::Parameter, "duplicate " + ball_name(BallId{v.id}));
    if (!std::isfinite(v.measure) || v.measure < 0.0) {
      fail(Errc::Parameter, ball_name(BallId{v.id}) + " has an invalid measure");
    }
    t.measure_[v.id] = v.measure;
    t.diameter_[v.id] = v.diameter;
    if (v.parent) {
      if (*v.parent >= n || *v.parent == v.id) {
        fail(Errc::Parameter, ball_name(BallId{v.id}) + " has an invalid parent");
      }
      t.parent_[v.id] = *v.parent;
    } else {
      if (root) fail(Errc::Parameter, "more than one root ball");
      root = BallId{v.id};
      t.parent_[v.id] = -1;
    }
  }
  if (!root) fail(Errc::Parameter, "no root ball");
  t.root_ = *root;
  for (const auto& v : vertices) {
    if (v.parent) t.children_[*v.parent].push_back(BallId{v.id});
  }
  t.finalize();

  for (BallId b : t.interior_) {
    double sum = 0.0;
    for (BallId c : t.children_[b.value]) sum += t.measure_[c.value];
    if (!additive(t.measure_[b.value], sum)) {
      std::ostringstream os;
      os.precision(17);
      os << ball_name(b) << ": measure " << t.measure_[b.value]
         << " differs from the sum of its maximal subballs " << sum;
      fail(Errc::Parameter, os.str());
    }
  }
  return t;
}

BallTree BallTree::from_leaf_measures(std::span<const std::optional<std::uint32_t>> parents,
                                      std::span<const double> diameters,
                                      std::span<const double> leaf_measures) {
  const std::size_t n = parents.size();
  if (diameters.size() != n || leaf_measures.size() != n) {
    fail(Errc::Parameter, "parents, diameters and measures must have equal length");
  }
  std::vector<VertexSpec> specs(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    specs[i] = VertexSpec{i, parents[i], 0.0, diameters[i]};
  }
  // Structure first, with zero measures, so the depth-first order is known.
  BallTree t = from_vertices(specs);
  for (BallId leaf : t.leaves_) {
    const double m = leaf_measures[leaf.value];
    if (!std::isfinite(m) || m < 0.0) {
      fail(Errc::Parameter, ball_name(leaf) + " has an invalid measure");
    }
    t.measure_[leaf.value] = m;
  }
  // Parents close after their children in the Euler tour.
  std::vector<BallId> order(t.interior_);
  std::sort(order.begin(), order.end(),
            [&](BallId a, BallId b) { return t.exit_[a.value] < t.exit_[b.value]; });
  for (BallId b : order) {
    double sum = 0.0;
    for (BallId c : t.children_[b.value]) sum += t.measure_[c.value];
    t.measure_[b.value] = sum;
  }
  return t;
}

BallTree build_padic_tree(int p, int depth) {
  if (p < 2) fail(Errc::Parameter, "p must be at least 2, got " + std::to_string(p));
  if (depth < 1) fail(Errc::Parameter, "depth must be at least 1, got " + std::to_string(depth));
  std::size_t n = 0;
  std::size_t width = 1;
  for (int k = 0; k <= depth; ++k) {
    n += width;
    if (n > (1u << 24)) fail(Errc::Parameter, "p-adic tree too large");
    width *= static_cast<std::size_t>(p);
  }

  BallTree t;
  t.parent_.assign(n, -1);
  t.children_.assign(n, {});
  t.measure_.assign(n, 1.0);
  t.diameter_.assign(n, 1.0);
  t.root_ = BallId{0};

  // Breadth-first numbering: level k occupies a contiguous id range.
  std::size_t level_begin = 0;
  width = 1;
  std::uint32_t next = 1;
  for (int k = 0; k < depth; ++k) {
    const double scale = std::pow(static_cast<double>(p), -(k + 1));
    for (std::size_t i = 0; i < width; ++i) {
      const auto parent = static_cast<std::uint32_t>(level_begin + i);
      for (int digit = 0; digit < p; ++digit) {
        t.parent_[next] = parent;
        t.children_[parent].push_back(BallId{next});
        t.measure_[next] = scale;
        t.diameter_[next] = scale;
        ++next;
      }
    }
    level_begin += width;
    width *= static_cast<std::size_t>(p);
  }
  t.padic_base_ = p;
  t.finalize();
  return t;
}

BallId sup(const BallTree& tree, BallId a, BallId b) {
  tree.check(a);
  tree.check(b);
  while (tree.level(a) > tree.level(b)) a = *tree.parent(a);
  while (tree.level(b) > tree.level(a)) b = *tree.parent(b);
  while (a != b) {
    a = *tree.parent(a);
    b = *tree.parent(b);
  }
  return a;
}

std::span<const BallId> maximal_subballs(const BallTree& tree, BallId ball) {
  return tree.children(ball);
}

std::size_t branching_index(const BallTree& tree, BallId ball) {
  return tree.children(ball).size();
}

Point make_point(const BallTree& tree, BallId b) {
  if (!tree.is_leaf(b)) fail(Errc::Domain, ball_name(b) + " is not a point (leaf)");
  return Point{b};
}

SubtreeReport validate_regular_subtree(const BallTree& tree, std::span<const BallId> members) {
  if (members.empty()) fail(Errc::Parameter, "regular subtree needs at least one ball");
  std::vector<bool> in(tree.size(), false);
  for (BallId b : members) {
    tree.check(b);
    in[b.value] = true;
  }
  std::vector<BallId> sorted;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    if (in[i]) sorted.push_back(BallId{i});
  }

  SubtreeReport report;
  auto describe = [](std::initializer_list<BallId> w) {
    std::string s;
    for (BallId b : w) s += (s.empty() ? "" : ", ") + std::to_string(b.value);
    return s;
  };

  // 1: closed under sup.
  [&] {
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      for (std::size_t j = i + 1; j < sorted.size(); ++j) {
        const BallId s = sup(tree, sorted[i], sorted[j]);
        if (!in[s.value]) {
          report.violations.push_back(
              {1,
               {sorted[i], sorted[j], s},
               "sup(" + describe({sorted[i], sorted[j]}) + ") = " + std::to_string(s.value) +
                   " is missing"});
          return;
        }
      }
    }
  }();

  // 2: closed under intervals I < L < J.
  [&] {
    for (BallId inner : sorted) {
      std::optional<BallId> gap;
      for (auto p = tree.parent(inner); p; p = tree.parent(*p)) {
        if (!in[p->value]) {
          if (!gap) gap = *p;
        } else if (gap) {
          report.violations.push_back(
              {2,
               {inner, *gap, *p},
               "ball " + std::to_string(gap->value) + " between " + describe({inner, *p}) +
                   " is missing"});
          return;
        }
      }
    }
  }();

  // 3: closed under siblings.
  [&] {
    for (BallId b : sorted) {
      const auto p = tree.parent(b);
      if (!p || !in[p->value]) continue;
      for (BallId sib : tree.children(*p)) {
        if (!in[sib.value]) {
          report.violations.push_back(
              {3,
               {*p, b, sib},
               "maximal subball " + std::to_string(sib.value) + " of ball " +
                   std::to_string(p->value) + " is missing"});
          return;
        }
      }
    }
  }();

  return report;
}

RegularSubtree::RegularSubtree(const BallTree& host, std::span<const BallId> members)
    : host_(&host) {
  const auto report = validate_regular_subtree(host, members);
  if (!report.ok()) {
    std::string msg = "not a regular subtree:";
    for (const auto& v : report.violations) {
      msg += " [condition " + std::to_string(v.condition) + ": " + v.message + "]";
    }
    fail(Errc::Domain, msg);
  }
  in_.assign(host.size(), false);
  for (BallId b : members) in_[b.value] = true;
  for (std::uint32_t i = 0; i < host.size(); ++i) {
    if (in_[i]) members_.push_back(BallId{i});
  }
  top_ = members_.front();
  for (BallId b : members_) {
    if (host.contains(b, top_)) top_ = b;
  }
  for (BallId b : members_) {
    const auto kids = host.children(b);
    if (!kids.empty() && in_[kids.front().value]) non_minimal_.push_back(b);
  }
  for (BallId leaf_or_ball : host.leaves()) {
    // Walk up to the lowest member above each host leaf; collect in DFS order.
    for (std::optional<BallId> cur = leaf_or_ball; cur; cur = host.parent(*cur)) {
      if (in_[cur->value]) {
        if (minimal_.empty() || minimal_.back() != *cur) {
          const auto kids = host.children(*cur);
          if (kids.empty() || !in_[kids.front().value]) minimal_.push_back(*cur);
        }
        break;
      }
    }
  }
}

RegularSubtree RegularSubtree::full(const BallTree& host) {
  std::vector<BallId> all;
  all.reserve(host.size());
  for (std::uint32_t i = 0; i < host.size(); ++i) all.push_back(BallId{i});
  return RegularSubtree(host, all);
}

bool RegularSubtree::contains(BallId b) const {
  host_->check(b);
  return in_[b.value];
}

}  // namespace uwave
