#include "core/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace uwave {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t child_position(const BallTree& tree, BallId parent, BallId child) {
  const auto kids = tree.children(parent);
  return static_cast<std::size_t>(std::find(kids.begin(), kids.end(), child) - kids.begin());
}

bool all_equal(std::span<const double> m) {
  for (double x : m) {
    if (std::abs(x - m.front()) > 1e-12 * std::max(x, m.front())) return false;
  }
  return true;
}

}  // namespace

std::vector<Wavelet> wavelet_basis(const BallTree& tree, BallId ball) {
  const auto kids = tree.children(ball);
  std::vector<std::size_t> positive;
  std::vector<double> mass;
  for (std::size_t k = 0; k < kids.size(); ++k) {
    const double m = tree.measure(kids[k]);
    if (m > 0.0) {
      positive.push_back(k);
      mass.push_back(m);
    }
  }
  const std::size_t p = positive.size();
  if (p < 2) {
    fail(Errc::Degenerate, "ball " + std::to_string(ball.value) + " has " + std::to_string(p) +
                               " maximal subballs of positive measure; at least 2 are needed");
  }

  std::vector<Wavelet> out;
  out.reserve(p - 1);
  if (all_equal(mass)) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(p) * mass.front());
    for (std::size_t j = 1; j < p; ++j) {
      Wavelet w{ball, static_cast<int>(j), std::vector<Complex>(kids.size())};
      for (std::size_t k = 0; k < p; ++k) {
        // Reduce j*k mod p first so the phase stays exact for p = 2, 4.
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % p) /
                             static_cast<double>(p);
        w.values[positive[k]] = std::polar(amp, phase);
      }
      out.push_back(std::move(w));
    }
    return out;
  }

  double prefix = 0.0;
  for (std::size_t k = 0; k + 1 < p; ++k) {
    prefix += mass[k];
    const double next = mass[k + 1];
    const double norm = std::sqrt(1.0 / prefix + 1.0 / next);
    Wavelet w{ball, static_cast<int>(k + 1), std::vector<Complex>(kids.size())};
    for (std::size_t i = 0; i <= k; ++i) w.values[positive[i]] = 1.0 / (prefix * norm);
    w.values[positive[k + 1]] = -1.0 / (next * norm);
    out.push_back(std::move(w));
  }
  return out;
}

Complex evaluate(const Wavelet& w, Point x, const BallTree& tree) {
  if (x.leaf == w.ball || !tree.contains(w.ball, x.leaf)) return {};
  const BallId child = tree.child_toward(w.ball, x.leaf);
  return w.values[child_position(tree, w.ball, child)];
}

Complex value_on_ball(const Wavelet& w, BallId b, const BallTree& tree) {
  if (tree.contains(b, w.ball)) {
    fail(Errc::Domain, "wavelet at ball " + std::to_string(w.ball.value) +
                           " is not constant on ball " + std::to_string(b.value));
  }
  if (!tree.contains(w.ball, b)) return {};
  return w.values[child_position(tree, w.ball, tree.child_toward(w.ball, b))];
}

Complex integral_over(const Wavelet& w, BallId b, const BallTree& tree) {
  // Zero mean: the integral over any ball containing w.ball vanishes.
  if (tree.contains(b, w.ball)) return {};
  return value_on_ball(w, b, tree) * tree.measure(b);
}

WaveletSystem::WaveletSystem(std::shared_ptr<const BallTree> tree) : tree_(std::move(tree)) {
  if (!tree_) fail(Errc::Parameter, "null tree");
  by_ball_.resize(tree_->size());
  for (BallId b : tree_->interior()) {
    std::size_t positive = 0;
    for (BallId c : tree_->children(b)) positive += tree_->measure(c) > 0.0 ? 1 : 0;
    if (positive < 2) continue;
    by_ball_[b.value] = wavelet_basis(*tree_, b);
    for (const auto& w : by_ball_[b.value]) indices_.push_back({b, w.j});
  }
  const double a = tree_->total_measure();
  constant_ = a > 0.0 ? 1.0 / std::sqrt(a) : 0.0;
}

std::span<const Wavelet> WaveletSystem::at_ball(BallId b) const {
  tree_->check(b);
  return by_ball_[b.value];
}

bool WaveletSystem::has(WaveletIndex idx) const {
  if (!tree_->valid(idx.ball)) return false;
  return idx.j >= 1 && idx.j <= static_cast<int>(by_ball_[idx.ball.value].size());
}

const Wavelet& WaveletSystem::at(WaveletIndex idx) const {
  if (!has(idx)) {
    fail(Errc::Domain, "no wavelet (" + std::to_string(idx.ball.value) + ", " +
                           std::to_string(idx.j) + ")");
  }
  return by_ball_[idx.ball.value][idx.j - 1];
}

TestFunction::TestFunction(RegularSubtree subtree, std::vector<Complex> values)
    : subtree_(std::move(subtree)), values_(std::move(values)) {
  if (values_.size() != subtree_.minimal().size()) {
    fail(Errc::Parameter, "test function needs " + std::to_string(subtree_.minimal().size()) +
                              " values, got " + std::to_string(values_.size()));
  }
  const BallTree& tree = subtree_.host();
  minimal_of_leaf_.assign(tree.leaves().size(), npos);
  const auto minimal = subtree_.minimal();
  for (std::size_t m = 0; m < minimal.size(); ++m) {
    for (BallId leaf : tree.leaves()) {
      if (tree.contains(minimal[m], leaf)) minimal_of_leaf_[tree.leaf_index(leaf)] = m;
    }
  }
}

TestFunction TestFunction::on_leaves(const BallTree& tree, std::vector<Complex> values) {
  return TestFunction(RegularSubtree::full(tree), std::move(values));
}

Complex TestFunction::at(Point x) const {
  const std::size_t m = minimal_of_leaf_[subtree_.host().leaf_index(x.leaf)];
  return m == npos ? Complex{} : values_[m];
}

std::vector<Complex> TestFunction::on_host_leaves() const {
  std::vector<Complex> out(minimal_of_leaf_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (minimal_of_leaf_[i] != npos) out[i] = values_[minimal_of_leaf_[i]];
  }
  return out;
}

WaveletExpansion analyze(const TestFunction& f, const WaveletSystem& system) {
  const BallTree& tree = system.tree();
  const RegularSubtree& s = f.subtree();
  if (&s.host() != &tree) fail(Errc::Domain, "test function lives on a different tree");

  // integral[b] = integral of f over b, for members and ancestors of the top.
  std::vector<Complex> integral(tree.size());
  const auto minimal = s.minimal();
  for (std::size_t m = 0; m < minimal.size(); ++m) {
    const Complex mass = f.values()[m] * tree.measure(minimal[m]);
    for (std::optional<BallId> cur = minimal[m]; cur; cur = tree.parent(*cur)) {
      integral[cur->value] += mass;
    }
  }

  WaveletExpansion e;
  auto project = [&](BallId ball) {
    const auto kids = tree.children(ball);
    for (const Wavelet& w : system.at_ball(ball)) {
      Complex c{};
      for (std::size_t k = 0; k < kids.size(); ++k) {
        c += std::conj(w.values[k]) * integral[kids[k].value];
      }
      e.coeffs[{ball, w.j}] = c;
    }
  };
  for (BallId b : s.non_minimal()) project(b);
  for (auto p = tree.parent(s.top()); p; p = tree.parent(*p)) project(*p);
  e.mean = system.constant_value() * integral[tree.root().value];
  return e;
}

TestFunction synthesize(const WaveletExpansion& e, const RegularSubtree& subtree,
                        const WaveletSystem& system) {
  const BallTree& tree = system.tree();
  if (&subtree.host() != &tree) fail(Errc::Domain, "subtree lives on a different tree");
  for (const auto& [idx, c] : e.coeffs) {
    system.at(idx);
    const bool inside = subtree.contains(idx.ball) && !tree.is_leaf(idx.ball) &&
                        subtree.contains(tree.children(idx.ball).front());
    const bool above = idx.ball != subtree.top() && tree.contains(idx.ball, subtree.top());
    if (!inside && !above) {
      fail(Errc::Domain, "coefficient at ball " + std::to_string(idx.ball.value) +
                             " lies outside the subtree");
    }
  }

  const auto minimal = subtree.minimal();
  std::vector<Complex> values(minimal.size(), e.mean * system.constant_value());
  for (std::size_t m = 0; m < minimal.size(); ++m) {
    for (auto anc = tree.parent(minimal[m]); anc; anc = tree.parent(*anc)) {
      auto it = e.coeffs.lower_bound({*anc, 0});
      for (; it != e.coeffs.end() && it->first.ball == *anc; ++it) {
        values[m] += it->second * value_on_ball(system.at(it->first), minimal[m], tree);
      }
    }
  }
  return TestFunction(subtree, std::move(values));
}

}  // namespace uwave
