#include "core/product_space.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace uwave {

namespace {

// Component choices of one factor for enumeration, in lexicographic order.
std::vector<Component> choices(const AugmentedFactor& f, bool generic_only) {
  std::vector<Component> out;
  const BallTree& t = f.tree();
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    if (!generic_only || !t.is_leaf(BallId{i})) out.push_back(Component::of(BallId{i}));
  }
  if (f.k_present) out.push_back(Component::k());
  return out;
}

void check_arity(std::size_t expected, std::size_t got) {
  if (expected != got) {
    fail(Errc::Parameter, "vertex arity " + std::to_string(got) + " does not match " +
                              std::to_string(expected) + " factors");
  }
}

// Strict order inside one factor; K is above every ball.
bool strictly_above(const BallTree& t, Component a, Component b) {
  if (a.is_k) return !b.is_k;
  if (b.is_k) return false;
  return a.ball != b.ball && t.contains(a.ball, b.ball);
}

}  // namespace

HyperVertex HyperVertex::of(std::span<const BallId> balls) {
  HyperVertex v;
  for (BallId b : balls) v.components.push_back(Component::of(b));
  return v;
}

AugmentedFactor AugmentedFactor::plain(std::shared_ptr<const WaveletSystem> s) {
  if (!s) fail(Errc::Parameter, "null factor");
  return AugmentedFactor{std::move(s), false};
}

AugmentedFactor AugmentedFactor::augmented(std::shared_ptr<const WaveletSystem> s) {
  if (!s) fail(Errc::Parameter, "null factor");
  if (!(s->tree().total_measure() > 0.0)) {
    fail(Errc::Degenerate, "augmentation needs a positive total measure");
  }
  return AugmentedFactor{std::move(s), true};
}

ProductHypergraph::ProductHypergraph(std::vector<AugmentedFactor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) fail(Errc::Parameter, "a product needs at least one factor");
  for (const auto& f : factors_) {
    if (!f.system) fail(Errc::Parameter, "null factor");
  }
}

std::size_t ProductHypergraph::vertex_count() const {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.tree().size() + (f.k_present ? 1 : 0);
  return n;
}

std::size_t ProductHypergraph::generic_count() const {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.tree().interior().size() + (f.k_present ? 1 : 0);
  return n;
}

void ProductHypergraph::check(const HyperVertex& v) const {
  check_arity(arity(), v.arity());
  for (std::size_t i = 0; i < arity(); ++i) {
    const Component c = v.components[i];
    if (c.is_k) {
      if (!factors_[i].k_present) {
        fail(Errc::Identity, "factor " + std::to_string(i + 1) + " has no augmentation vertex");
      }
    } else {
      factors_[i].tree().check(c.ball);
    }
  }
}

bool ProductHypergraph::contains(const HyperVertex& v) const {
  if (v.arity() != arity()) return false;
  for (std::size_t i = 0; i < arity(); ++i) {
    const Component c = v.components[i];
    if (c.is_k ? !factors_[i].k_present : !factors_[i].tree().valid(c.ball)) return false;
  }
  return true;
}

bool ProductHypergraph::is_generic(const HyperVertex& v) const {
  check(v);
  for (std::size_t i = 0; i < arity(); ++i) {
    const Component c = v.components[i];
    if (!c.is_k && factors_[i].tree().is_leaf(c.ball)) return false;
  }
  return true;
}

void ProductHypergraph::enumerate(bool generic_only,
                                  const std::function<void(const HyperVertex&)>& fn) const {
  std::vector<std::vector<Component>> axes;
  for (const auto& f : factors_) axes.push_back(choices(f, generic_only));
  for (const auto& a : axes) {
    if (a.empty()) return;
  }
  std::vector<std::size_t> odometer(arity(), 0);
  HyperVertex v;
  v.components.resize(arity());
  while (true) {
    for (std::size_t i = 0; i < arity(); ++i) v.components[i] = axes[i][odometer[i]];
    fn(v);
    std::size_t i = arity();
    while (i > 0) {
      --i;
      if (++odometer[i] < axes[i].size()) break;
      odometer[i] = 0;
      if (i == 0) return;
    }
  }
}

void ProductHypergraph::for_each_vertex(const std::function<void(const HyperVertex&)>& fn) const {
  enumerate(false, fn);
}

void ProductHypergraph::for_each_generic(const std::function<void(const HyperVertex&)>& fn) const {
  enumerate(true, fn);
}

std::vector<HyperVertex> ProductHypergraph::generic_vertices() const {
  std::vector<HyperVertex> out;
  for_each_generic([&](const HyperVertex& v) { out.push_back(v); });
  return out;
}

HyperVertex sup_vertex(const ProductHypergraph& g, const HyperVertex& a, const HyperVertex& b) {
  g.check(a);
  g.check(b);
  HyperVertex out;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const Component ca = a.components[i];
    const Component cb = b.components[i];
    if (ca.is_k || cb.is_k) {
      out.components.push_back(Component::k());
    } else {
      out.components.push_back(Component::of(sup(g.factor(i).tree(), ca.ball, cb.ball)));
    }
  }
  return out;
}

bool sufficiently_larger(const ProductHypergraph& g, const HyperVertex& a, const HyperVertex& b) {
  g.check(a);
  g.check(b);
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (!strictly_above(g.factor(i).tree(), a.components[i], b.components[i])) return false;
  }
  return true;
}

DecreasingEdges decreasing_edges(const ProductHypergraph& g, const HyperVertex& v) {
  g.check(v);
  DecreasingEdges out;
  out.count = 1;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const Component c = v.components[i];
    if (c.is_k) continue;  // K carries no edges
    const std::size_t p = branching_index(g.factor(i).tree(), c.ball);
    if (p == 0) continue;
    ++out.max_dimension;
    out.count *= p;
  }
  return out;
}

void for_each_decreasing_edge(const ProductHypergraph& g, const HyperVertex& v,
                              const std::function<void(const DecreasingEdge&)>& fn) {
  g.check(v);
  std::vector<std::size_t> axes;
  std::vector<std::span<const BallId>> kids;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const Component c = v.components[i];
    if (c.is_k || g.factor(i).tree().is_leaf(c.ball)) continue;
    axes.push_back(i);
    kids.push_back(g.factor(i).tree().children(c.ball));
  }
  const std::size_t d = axes.size();
  std::vector<std::size_t> pick(d, 0);
  DecreasingEdge edge;
  edge.axes = axes;
  edge.children.resize(d);
  edge.corners.assign(std::size_t{1} << d, v);
  while (true) {
    for (std::size_t k = 0; k < d; ++k) edge.children[k] = kids[k][pick[k]];
    for (std::size_t mask = 0; mask < edge.corners.size(); ++mask) {
      HyperVertex& corner = edge.corners[mask];
      corner = v;
      for (std::size_t k = 0; k < d; ++k) {
        if (mask & (std::size_t{1} << k)) corner.components[axes[k]] = Component::of(edge.children[k]);
      }
    }
    fn(edge);
    std::size_t k = d;
    while (true) {
      if (k == 0) return;
      --k;
      if (++pick[k] < kids[k].size()) break;
      pick[k] = 0;
    }
  }
}

std::vector<MultiWaveletIndex> multiwavelet_basis(const ProductHypergraph& g) {
  std::vector<MultiWaveletIndex> out;
  g.for_each_generic([&](const HyperVertex& v) {
    std::vector<int> counts(g.arity());
    for (std::size_t i = 0; i < g.arity(); ++i) {
      const Component c = v.components[i];
      counts[i] = c.is_k ? 1 : g.factor(i).system->count(c.ball);
    }
    for (int n : counts) {
      if (n == 0) return;
    }
    std::vector<int> j(g.arity());
    for (std::size_t i = 0; i < g.arity(); ++i) j[i] = v.components[i].is_k ? 0 : 1;
    while (true) {
      out.push_back({v, j});
      std::size_t i = g.arity();
      while (true) {
        if (i == 0) return;
        --i;
        if (v.components[i].is_k) continue;
        if (++j[i] <= counts[i]) break;
        j[i] = 1;
      }
    }
  });
  return out;
}

Complex evaluate(const ProductHypergraph& g, const MultiWaveletIndex& w,
                 std::span<const BallId> point) {
  check_arity(g.arity(), point.size());
  Complex value{1.0, 0.0};
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const auto& sys = *g.factor(i).system;
    const Component c = w.vertex.components[i];
    if (c.is_k) {
      value *= sys.constant_value();
    } else {
      value *= evaluate(sys.at({c.ball, w.j[i]}), make_point(sys.tree(), point[i]), sys.tree());
    }
  }
  return value;
}

ProductGrid::ProductGrid(std::vector<std::shared_ptr<const BallTree>> trees)
    : trees_(std::move(trees)) {
  if (trees_.empty()) fail(Errc::Parameter, "a grid needs at least one factor");
  extents_.resize(trees_.size());
  strides_.resize(trees_.size());
  for (std::size_t i = trees_.size(); i-- > 0;) {
    extents_[i] = trees_[i]->leaves().size();
    strides_[i] = size_;
    size_ *= extents_[i];
  }
}

std::vector<BallId> ProductGrid::point(std::size_t flat) const {
  std::vector<BallId> out(arity());
  for (std::size_t i = 0; i < arity(); ++i) {
    out[i] = trees_[i]->leaves()[(flat / strides_[i]) % extents_[i]];
  }
  return out;
}

double ProductGrid::measure(std::size_t flat) const {
  double m = 1.0;
  for (std::size_t i = 0; i < arity(); ++i) {
    m *= trees_[i]->measure(trees_[i]->leaves()[(flat / strides_[i]) % extents_[i]]);
  }
  return m;
}

std::vector<Complex> sample(const ProductHypergraph& g, const MultiWaveletIndex& w,
                            const ProductGrid& grid) {
  // Factor values on each axis first, then outer products.
  std::vector<std::vector<Complex>> axis(g.arity());
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const auto& sys = *g.factor(i).system;
    const Component c = w.vertex.components[i];
    for (BallId leaf : sys.tree().leaves()) {
      axis[i].push_back(c.is_k ? Complex{sys.constant_value(), 0.0}
                               : evaluate(sys.at({c.ball, w.j[i]}), Point{leaf}, sys.tree()));
    }
  }
  std::vector<Complex> out(grid.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    Complex v{1.0, 0.0};
    for (std::size_t i = 0; i < g.arity(); ++i) {
      v *= axis[i][(flat / grid.stride(i)) % grid.extent(i)];
    }
    out[flat] = v;
  }
  return out;
}

MultiOperator::MultiOperator(std::vector<Factor> factors, std::vector<OperatorTerm> terms)
    : factors_(std::move(factors)), terms_(std::move(terms)) {
  if (factors_.empty()) fail(Errc::Parameter, "an operator needs at least one factor");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (!f.system) fail(Errc::Parameter, "null factor");
    f.symbol.check_covers(f.system->tree());
    spectra_.push_back(spectrum(f.system->tree(), f.symbol, f.tail));
  }
  for (const auto& t : terms_) {
    for (std::size_t i : t.factors) {
      if (i >= factors_.size()) {
        fail(Errc::Parameter, "term refers to factor " + std::to_string(i + 1) + " of " +
                                  std::to_string(factors_.size()));
      }
    }
  }
}

MultiOperator MultiOperator::single(std::shared_ptr<const WaveletSystem> system, Symbol symbol,
                                    Tail tail) {
  return MultiOperator({Factor{std::move(system), std::move(symbol), tail}},
                       {OperatorTerm{{0}, {1.0, 0.0}}});
}

Complex MultiOperator::factor_eigenvalue(std::size_t i, Component c) const {
  if (c.is_k) return {};
  return spectra_.at(i).at(c.ball);
}

Complex MultiOperator::form(std::span<const Complex> lambdas) const {
  check_arity(arity(), lambdas.size());
  Complex total{};
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (std::size_t i : t.factors) m *= lambdas[i];
    total += m;
  }
  return total;
}

double MultiOperator::term_scale(std::span<const Complex> lambdas) const {
  check_arity(arity(), lambdas.size());
  double scale = 0.0;
  for (const auto& t : terms_) {
    double m = std::abs(t.coeff);
    for (std::size_t i : t.factors) m *= std::abs(lambdas[i]);
    scale = std::max(scale, m);
  }
  return scale > 0.0 ? scale : 1.0;
}

std::vector<Complex> MultiOperator::factor_eigenvalues(const HyperVertex& v) const {
  check_arity(arity(), v.arity());
  std::vector<Complex> out(arity());
  for (std::size_t i = 0; i < arity(); ++i) {
    const Component c = v.components[i];
    if (!c.is_k) {
      const BallTree& t = factors_[i].system->tree();
      t.check(c.ball);
      if (t.is_leaf(c.ball)) {
        fail(Errc::Domain, "component " + std::to_string(i + 1) + " (ball " +
                               std::to_string(c.ball.value) + ") is a leaf; vertex is not generic");
      }
    }
    out[i] = factor_eigenvalue(i, c);
  }
  return out;
}

ProductHypergraph MultiOperator::hypergraph(bool augmented) const {
  std::vector<AugmentedFactor> fs;
  for (const auto& f : factors_) {
    fs.push_back(augmented ? AugmentedFactor::augmented(f.system) : AugmentedFactor::plain(f.system));
  }
  return ProductHypergraph(std::move(fs));
}

ProductGrid MultiOperator::grid() const {
  std::vector<std::shared_ptr<const BallTree>> trees;
  for (const auto& f : factors_) trees.push_back(f.system->tree_ptr());
  return ProductGrid(std::move(trees));
}

MultiOperator MultiOperator::scaled(Complex c) const {
  std::vector<OperatorTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= c;
  return MultiOperator(factors_, std::move(terms));
}

Complex multi_eigenvalue(const MultiOperator& op, const HyperVertex& v) {
  const auto lambdas = op.factor_eigenvalues(v);
  return op.form(lambdas);
}

std::vector<Complex> apply_dense(const MultiOperator& op, std::span<const Complex> values) {
  const ProductGrid grid = op.grid();
  if (values.size() != grid.size()) {
    fail(Errc::Parameter, "expected " + std::to_string(grid.size()) + " grid values");
  }
  // T_i applied along axis i, fiber by fiber.
  auto along = [&](std::size_t axis, const std::vector<Complex>& in) {
    const auto& f = op.factor(axis);
    std::vector<Complex> out(in.size());
    const std::size_t n = grid.extent(axis);
    const std::size_t stride = grid.stride(axis);
    std::vector<Complex> fiber(n);
    for (std::size_t base = 0; base < in.size(); ++base) {
      if ((base / stride) % n != 0) continue;
      for (std::size_t k = 0; k < n; ++k) fiber[k] = in[base + k * stride];
      const auto result = apply_dense(f.system->tree(), f.symbol, fiber);
      for (std::size_t k = 0; k < n; ++k) out[base + k * stride] = result[k];
    }
    return out;
  };

  std::vector<Complex> total(values.size());
  const std::vector<Complex> input(values.begin(), values.end());
  for (const auto& t : op.terms()) {
    std::vector<Complex> cur = input;
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) cur = along(*it, cur);
    for (std::size_t k = 0; k < cur.size(); ++k) total[k] += t.coeff * cur[k];
  }
  return total;
}

}  // namespace uwave
