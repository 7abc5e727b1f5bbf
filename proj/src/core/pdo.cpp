#include "core/pdo.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace uwave {

Symbol Symbol::table(std::map<BallId, Complex> entries) {
  return Symbol(Table{std::move(entries)});
}

Symbol Symbol::homogeneous(Complex c, double beta) {
  if (!std::isfinite(beta) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    fail(Errc::Parameter, "homogeneous symbol needs finite c and beta");
  }
  return Symbol(Homogeneous{c, beta});
}

const Symbol::Table& Symbol::as_table() const {
  if (!is_table()) fail(Errc::Parameter, "symbol is not a table");
  return std::get<Table>(kind_);
}

const Symbol::Homogeneous& Symbol::as_homogeneous() const {
  if (!is_homogeneous()) fail(Errc::Parameter, "symbol is not homogeneous");
  return std::get<Homogeneous>(kind_);
}

Complex Symbol::value(const BallTree& tree, BallId b) const {
  tree.check(b);
  if (const auto* t = std::get_if<Table>(&kind_)) {
    const auto it = t->entries.find(b);
    if (it == t->entries.end()) {
      fail(Errc::Domain, "symbol table has no entry for ball " + std::to_string(b.value));
    }
    return it->second;
  }
  const auto& h = std::get<Homogeneous>(kind_);
  return h.c * std::pow(tree.diameter(b), -h.beta);
}

void Symbol::check_covers(const BallTree& tree) const {
  if (const auto* t = std::get_if<Table>(&kind_)) {
    for (const auto& [b, v] : t->entries) tree.check(b);
    for (BallId b : tree.interior()) value(tree, b);
  }
}

Symbol Symbol::with_tail(Tail t) const {
  Symbol s = *this;
  s.tail_ = t;
  return s;
}

Symbol Symbol::scaled(Complex factor) const {
  Symbol s = *this;
  if (auto* t = std::get_if<Table>(&s.kind_)) {
    for (auto& [b, v] : t->entries) v *= factor;
  } else {
    std::get<Homogeneous>(s.kind_).c *= factor;
  }
  return s;
}

ConvergenceReport check_convergence(const Symbol& symbol, const BallTree& tree, Tail tail) {
  if (tail == Tail::None) return {true, "finite tree: the ancestor sum is finite"};
  if (!symbol.is_homogeneous()) {
    return {false, "no tail model for table symbols"};
  }
  if (!tree.padic_base()) {
    return {false, "homogeneous tail requires a p-adic tree"};
  }
  const auto& h = symbol.as_homogeneous();
  const int p = *tree.padic_base();
  std::ostringstream os;
  os.precision(17);
  if (h.c == Complex{}) return {true, "zero symbol"};
  const double ratio = std::pow(static_cast<double>(p), 1.0 - h.beta);
  os << "tail terms c(1-1/p) r^k with r = p^(1-beta) = " << ratio;
  if (ratio < 1.0) return {true, os.str() + " < 1"};
  return {false, os.str() + " >= 1: the series diverges"};
}

Complex homogeneous_tail(const Symbol& symbol, const BallTree& tree) {
  if (!symbol.is_homogeneous()) fail(Errc::UnsupportedTail, "tail requested for a table symbol");
  if (!tree.padic_base()) fail(Errc::UnsupportedTail, "tail requested on a non-p-adic tree");
  const auto report = check_convergence(symbol, tree, Tail::HomogeneousExtension);
  if (!report.converges) fail(Errc::Divergent, report.diagnostic);
  const auto& h = symbol.as_homogeneous();
  if (h.c == Complex{}) return {};
  const double p = *tree.padic_base();
  const double r = std::pow(p, 1.0 - h.beta);
  // Root of a p-adic tree: diameter 1, measure 1.
  return h.c * (1.0 - 1.0 / p) * r / (1.0 - r);
}

Complex eigenvalue(const BallTree& tree, const Symbol& symbol, BallId ball, Tail tail) {
  tree.check(ball);
  if (tree.is_leaf(ball)) {
    fail(Errc::Domain, "ball " + std::to_string(ball.value) + " is a leaf and has no eigenvalue");
  }
  Complex lambda = symbol.value(tree, ball) * tree.measure(ball);
  BallId below = ball;
  for (auto above = tree.parent(ball); above; above = tree.parent(*above)) {
    lambda += symbol.value(tree, *above) * (tree.measure(*above) - tree.measure(below));
    below = *above;
  }
  if (tail == Tail::HomogeneousExtension) lambda += homogeneous_tail(symbol, tree);
  return lambda;
}

Complex Spectrum::at(BallId b) const {
  const auto it = eigenvalues.find(b);
  if (it == eigenvalues.end()) {
    fail(Errc::Domain, "no eigenvalue for ball " + std::to_string(b.value));
  }
  return it->second;
}

Spectrum spectrum(const BallTree& tree, const Symbol& symbol, Tail tail) {
  Spectrum s;
  const Complex extra = tail == Tail::HomogeneousExtension ? homogeneous_tail(symbol, tree)
                                                           : Complex{};
  for (BallId b : tree.interior()) {
    s.eigenvalues.emplace(b, eigenvalue(tree, symbol, b, Tail::None) + extra);
  }
  return s;
}

std::vector<Complex> apply_dense(const BallTree& tree, const Symbol& symbol,
                                 std::span<const Complex> f) {
  const auto leaves = tree.leaves();
  if (f.size() != leaves.size()) {
    fail(Errc::Parameter, "expected " + std::to_string(leaves.size()) + " leaf values");
  }
  std::vector<Complex> kernel(tree.size());
  for (BallId b : tree.interior()) kernel[b.value] = symbol.value(tree, b);

  std::vector<Complex> out(leaves.size());
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    Complex acc{};
    for (std::size_t y = 0; y < leaves.size(); ++y) {
      if (x == y) continue;
      const BallId s = sup(tree, leaves[x], leaves[y]);
      acc += kernel[s.value] * (f[x] - f[y]) * tree.measure(leaves[y]);
    }
    out[x] = acc;
  }
  return out;
}

TestFunction apply_dense(const BallTree& tree, const Symbol& symbol, const TestFunction& f) {
  if (&f.subtree().host() != &tree) fail(Errc::Domain, "test function lives on a different tree");
  return TestFunction::on_leaves(tree, apply_dense(tree, symbol, f.on_host_leaves()));
}

}  // namespace uwave
