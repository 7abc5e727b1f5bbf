#include "core/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/error.hpp"

namespace uwave {

namespace {

std::string describe(const MultiIndex& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.arity(); ++i) {
    s += (i ? ", " : "") + std::to_string(idx.vertex[i].value) + ":" + std::to_string(idx.j[i]);
  }
  return s + ")";
}

// Pairing of the i-th series factor with chi_{J0}:
//   j == 0:  nu(J0)
//   j != 0:  psi(chi_J0) - nu(J0) / nu(I0) * psi(chi_I0)
Complex factor_pairing(const WaveletSystem& sys, BallId anchor, BallId ball, int j, BallId j0) {
  const BallTree& t = sys.tree();
  if (j == 0) return t.measure(j0);
  const Wavelet& w = sys.at({ball, j});
  return integral_over(w, j0, t) - t.measure(j0) / t.measure(anchor) * integral_over(w, anchor, t);
}

// Balls I with lower < I <= upper, where upper contains lower.
std::vector<BallId> open_closed_path(const BallTree& t, BallId lower, BallId upper) {
  std::vector<BallId> out;
  for (BallId cur = lower; cur != upper;) {
    cur = *t.parent(cur);
    out.push_back(cur);
  }
  return out;
}

void check_same_factors(const GeneralizedFunction& u, const MultiOperator& op) {
  if (u.arity() != op.arity()) {
    fail(Errc::Domain, "operator has " + std::to_string(op.arity()) + " factors, function has " +
                           std::to_string(u.arity()));
  }
  for (std::size_t i = 0; i < u.arity(); ++i) {
    if (&op.factor(i).system->tree() != &u.factor(i).tree()) {
      fail(Errc::Domain, "factor " + std::to_string(i + 1) + " lives on a different tree");
    }
  }
}

}  // namespace

bool MultiIndex::is_wavelet() const {
  return std::all_of(j.begin(), j.end(), [](int x) { return x != 0; });
}

GeneralizedFunction::GeneralizedFunction(Factors factors, std::vector<BallId> anchor,
                                         Complex anchor_value,
                                         std::map<MultiIndex, Complex> coeffs)
    : factors_(std::move(factors)),
      anchor_(std::move(anchor)),
      anchor_value_(anchor_value),
      coeffs_(std::move(coeffs)) {
  if (factors_.empty()) fail(Errc::Parameter, "a generalized function needs at least one factor");
  if (anchor_.size() != factors_.size()) {
    fail(Errc::Parameter, "anchor arity " + std::to_string(anchor_.size()) + " does not match " +
                              std::to_string(factors_.size()) + " factors");
  }
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!factors_[i]) fail(Errc::Parameter, "null factor");
    const BallTree& t = factors_[i]->tree();
    t.check(anchor_[i]);
    if (!(t.measure(anchor_[i]) > 0.0)) {
      fail(Errc::Anchor, "anchor ball " + std::to_string(anchor_[i].value) + " of factor " +
                             std::to_string(i + 1) + " has measure zero");
    }
  }
  for (const auto& [idx, c] : coeffs_) {
    if (idx.vertex.size() != arity() || idx.j.size() != arity()) {
      fail(Errc::Parameter, "coefficient " + describe(idx) + " has the wrong arity");
    }
    bool all_zero = true;
    for (std::size_t i = 0; i < arity(); ++i) {
      const int j = idx.j[i];
      if (j < 0) fail(Errc::Domain, "negative index in " + describe(idx));
      if (j == 0) {
        if (idx.vertex[i] != anchor_[i]) {
          fail(Errc::Domain, "coefficient " + describe(idx) +
                                 ": a j = 0 component must sit on the anchor ball");
        }
      } else {
        all_zero = false;
        if (!factors_[i]->has({idx.vertex[i], j})) {
          fail(Errc::Domain, "coefficient " + describe(idx) + " names no wavelet");
        }
      }
    }
    if (all_zero) {
      fail(Errc::Domain, "coefficient " + describe(idx) + " duplicates the anchor value");
    }
  }
}

GeneralizedFunction GeneralizedFunction::one_dim(std::shared_ptr<const WaveletSystem> system,
                                                 BallId anchor, Complex anchor_value,
                                                 const std::map<WaveletIndex, Complex>& coeffs) {
  std::map<MultiIndex, Complex> c;
  for (const auto& [idx, v] : coeffs) c.emplace(MultiIndex::one(idx.ball, idx.j), v);
  return GeneralizedFunction({std::move(system)}, {anchor}, anchor_value, std::move(c));
}

Complex GeneralizedFunction::coefficient(const MultiIndex& idx) const {
  if (idx.vertex == anchor_ &&
      std::all_of(idx.j.begin(), idx.j.end(), [](int j) { return j == 0; })) {
    return anchor_value_;
  }
  const auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? Complex{} : it->second;
}

double GeneralizedFunction::anchor_measure() const {
  double m = 1.0;
  for (std::size_t i = 0; i < arity(); ++i) m *= factors_[i]->tree().measure(anchor_[i]);
  return m;
}

Complex eval_on_char(const GeneralizedFunction& u, BallId j0) {
  if (u.arity() != 1) fail(Errc::Parameter, "eval_on_char needs a one-dimensional function");
  const WaveletSystem& sys = u.factor(0);
  const BallTree& t = sys.tree();
  t.check(j0);
  const BallId i0 = u.anchor()[0];
  const BallId top = sup(t, j0, i0);
  const double ratio = t.measure(j0) / t.measure(i0);

  auto sum_along = [&](BallId from, BallId pairing_ball) {
    Complex s{};
    for (BallId ball : open_closed_path(t, from, top)) {
      for (const Wavelet& w : sys.at_ball(ball)) {
        const Complex c = u.coefficient(MultiIndex::one(ball, w.j));
        if (c != Complex{}) s += c * integral_over(w, pairing_ball, t);
      }
    }
    return s;
  };

  return u.anchor_value() * t.measure(j0) + sum_along(j0, j0) - ratio * sum_along(i0, i0);
}

Complex eval_on_char_nd(const GeneralizedFunction& u, std::span<const BallId> j0) {
  const std::size_t n = u.arity();
  if (j0.size() != n) fail(Errc::Parameter, "product ball has the wrong arity");

  struct Candidate {
    BallId ball;
    int j;
    Complex value;
  };
  std::vector<std::vector<Candidate>> per_factor(n);
  for (std::size_t i = 0; i < n; ++i) {
    const WaveletSystem& sys = u.factor(i);
    const BallTree& t = sys.tree();
    t.check(j0[i]);
    const BallId i0 = u.anchor()[i];
    const BallId top = sup(t, j0[i], i0);
    per_factor[i].push_back({i0, 0, t.measure(j0[i])});
    std::set<BallId> balls;
    for (BallId b : open_closed_path(t, j0[i], top)) balls.insert(b);
    for (BallId b : open_closed_path(t, i0, top)) balls.insert(b);
    for (BallId b : balls) {
      for (const Wavelet& w : sys.at_ball(b)) {
        per_factor[i].push_back({b, w.j, factor_pairing(sys, i0, b, w.j, j0[i])});
      }
    }
  }

  Complex total{};
  std::vector<std::size_t> pick(n, 0);
  MultiIndex idx{std::vector<BallId>(n), std::vector<int>(n)};
  while (true) {
    Complex term{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate& c = per_factor[i][pick[i]];
      idx.vertex[i] = c.ball;
      idx.j[i] = c.j;
      term *= c.value;
    }
    const Complex coeff = u.coefficient(idx);
    if (coeff != Complex{}) total += coeff * term;
    std::size_t i = n;
    while (true) {
      if (i == 0) return total;
      --i;
      if (++pick[i] < per_factor[i].size()) break;
      pick[i] = 0;
    }
  }
}

Complex eval_on_test(const GeneralizedFunction& u, const TestFunction& f) {
  if (u.arity() != 1) fail(Errc::Parameter, "eval_on_test needs a one-dimensional function");
  const WaveletSystem& sys = u.factor(0);
  const BallTree& t = sys.tree();
  if (&f.subtree().host() != &t) fail(Errc::Domain, "test function lives on a different tree");

  // <conj psi, f> = conj(<psi, conj f>).
  std::vector<Complex> conj_values(f.values().begin(), f.values().end());
  for (auto& v : conj_values) v = std::conj(v);
  const WaveletExpansion e = analyze(TestFunction(f.subtree(), std::move(conj_values)), sys);

  Complex total{};
  for (const auto& [idx, c] : e.coeffs) {
    total += std::conj(c) * u.coefficient(MultiIndex::one(idx.ball, idx.j));
  }
  const double a = t.total_measure();
  if (a > 0.0) {
    Complex integral{};
    const auto minimal = f.subtree().minimal();
    for (std::size_t m = 0; m < minimal.size(); ++m) {
      integral += f.values()[m] * t.measure(minimal[m]);
    }
    total += integral / a * eval_on_char(u, t.root());
  }
  return total;
}

Complex eval_on_test(const GeneralizedFunction& u, const WaveletExpansion& f) {
  if (u.arity() != 1) fail(Errc::Parameter, "eval_on_test needs a one-dimensional function");
  const WaveletSystem& sys = u.factor(0);
  return eval_on_test(u, synthesize(f, RegularSubtree::full(sys.tree()), sys));
}

Complex lizorkin_pair(const LizorkinSeries& phi, const WaveletExpansion& f) {
  if (phi.arity != 1) fail(Errc::Parameter, "lizorkin_pair needs a one-dimensional series");
  double scale = 1.0;
  for (const auto& [idx, c] : f.coeffs) scale = std::max(scale, std::abs(c));
  if (std::abs(f.mean) > 1e-12 * scale) {
    fail(Errc::Domain, "test function does not have mean zero");
  }
  Complex total{};
  for (const auto& [idx, c] : f.coeffs) {
    const auto it = phi.coeffs.find(MultiIndex::one(idx.ball, idx.j));
    if (it != phi.coeffs.end()) total += it->second * c;
  }
  return total;
}

Complex lizorkin_pair(const LizorkinSeries& phi, const std::map<MultiIndex, Complex>& f) {
  Complex total{};
  for (const auto& [idx, c] : f) {
    if (idx.arity() != phi.arity) fail(Errc::Parameter, "index arity mismatch");
    if (!idx.is_wavelet()) {
      fail(Errc::Domain, "test function component " + describe(idx) + " is not mean-zero");
    }
    const auto it = phi.coeffs.find(idx);
    if (it != phi.coeffs.end()) total += it->second * c;
  }
  return total;
}

LizorkinSeries apply_operator(const GeneralizedFunction& u, const Spectrum& spectrum) {
  if (u.arity() != 1) fail(Errc::Parameter, "a spectrum applies to one-dimensional functions");
  LizorkinSeries out{1, {}};
  for (const auto& [idx, c] : u.coeffs()) {
    if (idx.is_wavelet()) out.coeffs.emplace(idx, spectrum.at(idx.vertex[0]) * c);
  }
  return out;
}

LizorkinSeries apply_operator(const GeneralizedFunction& u, const MultiOperator& op) {
  check_same_factors(u, op);
  LizorkinSeries out{u.arity(), {}};
  for (const auto& [idx, c] : u.coeffs()) {
    if (!idx.is_wavelet()) continue;
    out.coeffs.emplace(idx, multi_eigenvalue(op, HyperVertex::of(idx.vertex)) * c);
  }
  return out;
}

std::vector<Complex> realize(const GeneralizedFunction& u) {
  std::vector<std::shared_ptr<const BallTree>> trees;
  for (const auto& f : u.factors()) trees.push_back(f->tree_ptr());
  const ProductGrid grid(trees);
  const std::size_t n = u.arity();

  // Factor function of index (ball, j) on the leaves of factor i.
  auto factor_values = [&](std::size_t i, BallId ball, int j) {
    const WaveletSystem& sys = u.factor(i);
    const BallTree& t = sys.tree();
    std::vector<Complex> out(t.leaves().size(), Complex{1.0, 0.0});
    if (j == 0) return out;
    const Wavelet& w = sys.at({ball, j});
    const BallId i0 = u.anchor()[i];
    const Complex shift = integral_over(w, i0, t) / t.measure(i0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = evaluate(w, Point{t.leaves()[k]}, t) - shift;
    }
    return out;
  };

  std::vector<Complex> values(grid.size(), u.anchor_value());
  std::vector<std::vector<Complex>> axis(n);
  for (const auto& [idx, c] : u.coeffs()) {
    if (c == Complex{}) continue;
    for (std::size_t i = 0; i < n; ++i) axis[i] = factor_values(i, idx.vertex[i], idx.j[i]);
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      Complex v = c;
      for (std::size_t i = 0; i < n; ++i) v *= axis[i][(flat / grid.stride(i)) % grid.extent(i)];
      values[flat] += v;
    }
  }
  return values;
}

}  // namespace uwave
