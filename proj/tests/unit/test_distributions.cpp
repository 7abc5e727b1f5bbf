#include <gtest/gtest.h>

#include <set>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace uwave;

namespace {

using System = std::shared_ptr<const WaveletSystem>;

System padic_system(int p, int depth) {
  return std::make_shared<const WaveletSystem>(uwt::shared_tree(build_padic_tree(p, depth)));
}

System random_system(uwt::Rng& rng, uwt::TreeShape shape = {}) {
  return std::make_shared<const WaveletSystem>(uwt::shared_tree(uwt::random_tree(rng, shape)));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no uwave::Error thrown";
  return Errc::Io;
}

BallId positive_ball(uwt::Rng& rng, const BallTree& t) {
  for (;;) {
    const BallId b = uwt::random_ball(rng, t);
    if (t.measure(b) > 0.0) return b;
  }
}

// Smallest regular subtree holding `top` and the paths from it to `targets`.
RegularSubtree path_closure(const BallTree& t, BallId top, std::vector<BallId> targets) {
  std::set<BallId> m{top};
  for (BallId b : targets) {
    for (BallId cur = b; cur != top; cur = *t.parent(cur)) {
      for (BallId s : t.children(*t.parent(cur))) m.insert(s);
    }
  }
  return RegularSubtree(t, std::vector<BallId>(m.begin(), m.end()));
}

TestFunction indicator_on(const RegularSubtree& s, BallId ball) {
  std::vector<Complex> v;
  for (BallId m : s.minimal()) v.push_back(s.host().contains(ball, m) ? 1.0 : 0.0);
  return TestFunction(s, v);
}

TestFunction conj_wavelet(const BallTree& t, const Wavelet& w) {
  std::vector<Complex> v;
  for (BallId l : t.leaves()) v.push_back(std::conj(evaluate(w, Point{l}, t)));
  return TestFunction::on_leaves(t, v);
}

}  // namespace

TEST(GeneralizedFunction, ConstructionErrors) {
  const auto s = padic_system(2, 2);
  const std::vector<VertexSpec> zero{
      {0, std::nullopt, 1.0, 1.0}, {1, 0u, 1.0, 0.5}, {2, 0u, 0.0, 0.5}, {3, 1u, 0.5, 0.25}, {4, 1u, 0.5, 0.25}};
  const auto z = std::make_shared<const WaveletSystem>(uwt::shared_tree(BallTree::from_vertices(zero)));
  EXPECT_EQ(code_of([&] { GeneralizedFunction::one_dim(z, BallId{2}, 1.0, {}); }), Errc::Anchor);
  EXPECT_EQ(code_of([&] { GeneralizedFunction::one_dim(s, BallId{0}, 1.0, {{{BallId{3}, 1}, 1.0}}); }),
            Errc::Domain);
  EXPECT_EQ(code_of([&] { GeneralizedFunction::one_dim(s, BallId{0}, 1.0, {{{BallId{0}, 2}, 1.0}}); }),
            Errc::Domain);
  const GeneralizedFunction::Factors two{s, s};
  const std::vector<BallId> anchor{BallId{1}, BallId{0}};
  EXPECT_EQ(code_of([&] {
              GeneralizedFunction(two, anchor, 0.0, {{MultiIndex{{BallId{2}, BallId{0}}, {0, 1}}, 1.0}});
            }),
            Errc::Domain);
  EXPECT_EQ(code_of([&] {
              GeneralizedFunction(two, anchor, 0.0, {{MultiIndex{{BallId{1}, BallId{0}}, {0, 0}}, 1.0}});
            }),
            Errc::Domain);
  EXPECT_NO_THROW(
      GeneralizedFunction(two, anchor, 0.0, {{MultiIndex{{BallId{1}, BallId{0}}, {0, 1}}, 1.0}}));
}

TEST(EvalOnChar, ZeroCoefficients) {
  const auto s = padic_system(3, 2);
  const Complex u0{1.5, -0.5};
  const auto u = GeneralizedFunction::one_dim(s, BallId{1}, u0, {});
  for (std::uint32_t b = 0; b < s->tree().size(); ++b) {
    EXPECT_NEAR(std::abs(eval_on_char(u, BallId{b}) - u0 * s->tree().measure(BallId{b})), 0.0, 1e-15);
  }
}

TEST(EvalOnChar, AnchorIsExact) {
  uwt::Rng rng(41);
  const auto s = random_system(rng);
  const BallId i0 = positive_ball(rng, s->tree());
  const Complex u0{0.25, 2.0};
  const auto u = GeneralizedFunction::one_dim(s, i0, u0, uwt::random_sparse_coeffs(rng, *s, 0.8));
  EXPECT_NEAR(std::abs(eval_on_char(u, i0) - u0 * s->tree().measure(i0)), 0.0, 1e-12);
}

TEST(EvalOnChar, SingleCoefficientMatchesNaive) {
  const auto s = padic_system(2, 3);
  const auto& t = s->tree();
  for (const auto& idx : s->indices()) {
    const auto u = GeneralizedFunction::one_dim(s, t.leaves()[2], {0.5, 0.0}, {{idx, {1.0, -2.0}}});
    for (std::uint32_t b = 0; b < t.size(); ++b) {
      const std::vector<BallId> j0{BallId{b}};
      EXPECT_NEAR(std::abs(eval_on_char(u, BallId{b}) - uwt::naive_eval(u, j0)), 0.0, 1e-12);
    }
  }
}

TEST(EvalOnCharNd, PureAnchorTerm) {
  const auto a = padic_system(2, 2);
  const auto b = padic_system(3, 1);
  const Complex u0{2.0, 1.0};
  const GeneralizedFunction u({a, b}, {BallId{1}, BallId{0}}, u0, {});
  const std::vector<BallId> j0{BallId{4}, BallId{2}};
  EXPECT_NEAR(std::abs(eval_on_char_nd(u, j0) - u0 * 0.25 / 3.0), 0.0, 1e-15);
  const std::vector<BallId> i0{BallId{1}, BallId{0}};
  EXPECT_NEAR(std::abs(eval_on_char_nd(u, i0) - u0 * 0.5), 0.0, 1e-15);
}

TEST(EvalOnCharNd, MixedCoefficientMatchesNaive) {
  const auto a = padic_system(2, 2);
  const auto b = padic_system(3, 2);
  const std::vector<BallId> anchor{BallId{1}, BallId{2}};
  const std::map<MultiIndex, Complex> coeffs{
      {MultiIndex{{BallId{1}, BallId{0}}, {0, 2}}, {1.0, 0.5}},
      {MultiIndex{{BallId{0}, BallId{2}}, {1, 0}}, {-0.5, 0.0}},
      {MultiIndex{{BallId{2}, BallId{3}}, {1, 1}}, {0.0, 2.0}},
  };
  const GeneralizedFunction u({a, b}, anchor, {0.3, 0.0}, coeffs);
  for (std::uint32_t x = 0; x < a->tree().size(); ++x) {
    for (std::uint32_t y = 0; y < b->tree().size(); ++y) {
      const std::vector<BallId> j0{BallId{x}, BallId{y}};
      EXPECT_NEAR(std::abs(eval_on_char_nd(u, j0) - uwt::naive_eval(u, j0)), 0.0, 1e-12);
    }
  }
}

TEST(EvalOnCharNd, AnchorVertexIsExact) {
  uwt::Rng rng(42);
  const auto a = random_system(rng, {.max_depth = 2});
  const auto b = random_system(rng, {.max_depth = 2});
  const std::vector<BallId> anchor{positive_ball(rng, a->tree()), positive_ball(rng, b->tree())};
  std::map<MultiIndex, Complex> coeffs;
  for (const auto& ia : a->indices()) {
    for (const auto& ib : b->indices()) coeffs[MultiIndex{{ia.ball, ib.ball}, {ia.j, ib.j}}] = uwt::random_complex(rng);
    coeffs[MultiIndex{{ia.ball, anchor[1]}, {ia.j, 0}}] = uwt::random_complex(rng);
  }
  const Complex u0{1.0, 1.0};
  const GeneralizedFunction u({a, b}, anchor, u0, coeffs);
  const double nu = a->tree().measure(anchor[0]) * b->tree().measure(anchor[1]);
  EXPECT_NEAR(std::abs(eval_on_char_nd(u, anchor) - u0 * nu), 0.0, 1e-12);
}

TEST(EvalOnTest, WaveletPairing) {
  const auto s = padic_system(3, 2);
  const auto& t = s->tree();
  for (const auto& idx : s->indices()) {
    LizorkinSeries phi;
    phi.coeffs[MultiIndex::one(idx.ball, idx.j)] = 1.0;
    const auto e = analyze(TestFunction::on_leaves(t, [&] {
                             std::vector<Complex> v;
                             for (BallId l : t.leaves()) v.push_back(evaluate(s->at(idx), Point{l}, t));
                             return v;
                           }()),
                           *s);
    EXPECT_NEAR(std::abs(lizorkin_pair(phi, e) - 1.0), 0.0, 1e-14);
  }
  LizorkinSeries phi;
  phi.coeffs[MultiIndex::one(BallId{0}, 1)] = 3.0;
  EXPECT_EQ(lizorkin_pair(phi, WaveletExpansion{}), Complex{});
  const auto u = GeneralizedFunction::one_dim(s, BallId{0}, 1.0, {{{BallId{0}, 1}, 2.0}});
  EXPECT_EQ(eval_on_test(u, TestFunction::on_leaves(t, std::vector<Complex>(t.leaves().size()))), Complex{});
}

TEST(EvalOnTest, NonZeroMeanIsDomainError) {
  WaveletExpansion e;
  e.mean = 1.0;
  EXPECT_EQ(code_of([&] { lizorkin_pair(LizorkinSeries{}, e); }), Errc::Domain);
}

TEST(EvalOnTest, LizorkinPairMatchesDenseCoefficients) {
  uwt::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_system(rng, {.max_depth = 3});
    const auto& t = s->tree();
    LizorkinSeries phi;
    for (const auto& [idx, z] : uwt::random_sparse_coeffs(rng, *s, 0.5)) {
      phi.coeffs[MultiIndex::one(idx.ball, idx.j)] = z;
    }
    // Random mean-zero f: subtract its average.
    auto vals = uwt::random_leaf_values(rng, t);
    Complex mean{};
    for (std::size_t k = 0; k < vals.size(); ++k) mean += vals[k] * t.measure(t.leaves()[k]);
    mean /= t.total_measure();
    for (auto& v : vals) v -= mean;
    const Eigen::VectorXcd f = Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    Complex want{};
    for (const auto& [idx, z] : phi.coeffs) {
      const auto w = uwt::wavelet_vector(t, s->at({idx.vertex[0], idx.j[0]}));
      const Eigen::VectorXcd m = uwt::leaf_measure_vector(t);
      want += z * (w.conjugate().cwiseProduct(f).cwiseProduct(m)).sum();
    }
    auto e = analyze(TestFunction::on_leaves(t, vals), *s);
    ASSERT_NEAR(std::abs(e.mean), 0.0, 1e-12);
    e.mean = 0.0;
    EXPECT_NEAR(std::abs(lizorkin_pair(phi, e) - want), 0.0, 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST(EvalOnTest, ExpansionAndPointValuesAgree) {
  uwt::Rng rng(44);
  const auto s = random_system(rng);
  const auto& t = s->tree();
  const auto u = GeneralizedFunction::one_dim(s, positive_ball(rng, t), uwt::random_complex(rng),
                                              uwt::random_sparse_coeffs(rng, *s, 0.6));
  const TestFunction f = TestFunction::on_leaves(t, uwt::random_leaf_values(rng, t));
  const Complex a = eval_on_test(u, f);
  const Complex b = eval_on_test(u, analyze(f, *s));
  // Oracle: integrate the realized series against f.
  const auto r = uwt::naive_realize(u);
  Complex c{};
  const auto fv = f.on_host_leaves();
  for (std::size_t k = 0; k < fv.size(); ++k) c += r[static_cast<Eigen::Index>(k)] * fv[k] * t.measure(t.leaves()[k]);
  EXPECT_NEAR(std::abs(a - c), 0.0, 1e-12 * (1.0 + std::abs(c)));
  EXPECT_NEAR(std::abs(b - c), 0.0, 1e-12 * (1.0 + std::abs(c)));
}

TEST(ApplyOperator, Examples) {
  const auto s = padic_system(2, 2);
  const Spectrum sp = spectrum(s->tree(), Symbol::homogeneous(1.0, 0.5));
  const auto c = GeneralizedFunction::one_dim(s, BallId{0}, 4.0, {});
  EXPECT_TRUE(apply_operator(c, sp).coeffs.empty());
  Spectrum three;
  for (BallId b : s->tree().interior()) three.eigenvalues[b] = 3.0;
  const auto d = GeneralizedFunction::one_dim(s, BallId{0}, 4.0, {{{BallId{1}, 1}, 1.0}});
  const auto tu = apply_operator(d, three);
  ASSERT_EQ(tu.coeffs.size(), 1u);
  EXPECT_EQ(tu.coeffs.at(MultiIndex::one(BallId{1}, 1)), Complex(3.0));
}

TEST(ApplyOperator, PairingMatchesDenseOperator) {
  // p = 2 keeps the wavelets real, so the literal pairing sum and the integral agree.
  const auto s = padic_system(2, 2);
  const auto& t = s->tree();
  uwt::Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const Symbol sym = uwt::random_table_symbol(rng, t);
    const auto u = GeneralizedFunction::one_dim(s, BallId{1}, uwt::random_complex(rng),
                                                uwt::random_sparse_coeffs(rng, *s, 1.0));
    const LizorkinSeries tu = apply_operator(u, spectrum(t, sym));
    auto vals = uwt::random_leaf_values(rng, t);
    Complex mean{};
    for (std::size_t k = 0; k < vals.size(); ++k) mean += vals[k] * t.measure(t.leaves()[k]);
    for (auto& v : vals) v -= mean / t.total_measure();
    auto e = analyze(TestFunction::on_leaves(t, vals), *s);
    e.mean = 0.0;
    const Eigen::VectorXcd tu_dense = uwt::dense_operator(t, sym) * uwt::naive_realize(u);
    Complex want{};
    for (std::size_t k = 0; k < vals.size(); ++k) want += tu_dense[static_cast<Eigen::Index>(k)] * vals[k] * t.measure(t.leaves()[k]);
    EXPECT_NEAR(std::abs(lizorkin_pair(tu, e) - want), 0.0, 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST(ApplyOperator, ForeignOperatorIsDomainError) {
  const auto a = padic_system(2, 2);
  const auto b = padic_system(2, 2);
  const auto u = GeneralizedFunction::one_dim(a, BallId{0}, 0.0, {});
  const auto op = MultiOperator::single(b, Symbol::homogeneous(1.0, 0.0));
  EXPECT_EQ(code_of([&] { apply_operator(u, op); }), Errc::Domain);
}

TEST(Realize, MatchesOracle) {
  uwt::Rng rng(46);
  const auto a = random_system(rng, {.max_depth = 2});
  const auto b = random_system(rng, {.max_depth = 2});
  const std::vector<BallId> anchor{positive_ball(rng, a->tree()), positive_ball(rng, b->tree())};
  std::map<MultiIndex, Complex> coeffs;
  for (const auto& ia : a->indices()) {
    for (const auto& ib : b->indices()) coeffs[MultiIndex{{ia.ball, ib.ball}, {ia.j, ib.j}}] = uwt::random_complex(rng);
  }
  for (const auto& ib : b->indices()) coeffs[MultiIndex{{anchor[0], ib.ball}, {0, ib.j}}] = uwt::random_complex(rng);
  const GeneralizedFunction u({a, b}, anchor, uwt::random_complex(rng), coeffs);
  const auto got = realize(u);
  const auto want = uwt::naive_realize(u);
  ASSERT_EQ(static_cast<Eigen::Index>(got.size()), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(std::abs(got[k] - want[static_cast<Eigen::Index>(k)]), 0.0, 1e-12);
}

TEST(DistributionProperty, ConstantShiftInvariance) {
  uwt::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_system(rng);
    const auto& t = s->tree();
    const BallId i0 = positive_ball(rng, t);
    const auto coeffs = uwt::random_sparse_coeffs(rng, *s, 0.5);
    const Complex u0 = uwt::random_complex(rng);
    const Complex c = uwt::random_complex(rng);
    const auto u = GeneralizedFunction::one_dim(s, i0, u0, coeffs);
    const auto v = GeneralizedFunction::one_dim(s, i0, u0 + c, coeffs);
    auto e = analyze(TestFunction::on_leaves(t, uwt::random_leaf_values(rng, t)), *s);
    e.mean = 0.0;
    const Complex a = eval_on_test(u, e);
    EXPECT_NEAR(std::abs(a - eval_on_test(v, e)), 0.0, 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST(DistributionProperty, AnchorReconstruction) {
  uwt::Rng rng(48);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_system(rng);
    const auto& t = s->tree();
    const BallId i0 = positive_ball(rng, t);
    const auto coeffs = uwt::random_sparse_coeffs(rng, *s, 0.5);
    const Complex u0 = uwt::random_complex(rng);
    const auto u = GeneralizedFunction::one_dim(s, i0, u0, coeffs);
    EXPECT_NEAR(std::abs(eval_on_char(u, i0) - u0 * t.measure(i0)), 0.0, 1e-12);
    for (const auto& idx : s->indices()) {
      const auto it = coeffs.find(idx);
      const Complex want = it == coeffs.end() ? Complex{} : it->second;
      EXPECT_NEAR(std::abs(eval_on_test(u, conj_wavelet(t, s->at(idx))) - want), 0.0, 1e-12);
    }
  }
}

TEST(DistributionProperty, AdditiveOverSiblings) {
  uwt::Rng rng(49);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_system(rng);
    const auto& t = s->tree();
    const auto u = GeneralizedFunction::one_dim(s, positive_ball(rng, t), uwt::random_complex(rng),
                                                uwt::random_sparse_coeffs(rng, *s, 0.5));
    for (BallId b : t.interior()) {
      const auto kids = t.children(b);
      // Two disjoint siblings, via a test function on their union.
      std::vector<Complex> ind(t.leaves().size());
      for (std::size_t k = 0; k < ind.size(); ++k) {
        const BallId l = t.leaves()[k];
        ind[k] = t.contains(kids[0], l) || t.contains(kids[1], l) ? 1.0 : 0.0;
      }
      const Complex both = eval_on_test(u, TestFunction::on_leaves(t, ind));
      const Complex sum = eval_on_char(u, kids[0]) + eval_on_char(u, kids[1]);
      EXPECT_NEAR(std::abs(both - sum), 0.0, 1e-12 * (1.0 + std::abs(sum)));
      Complex all{};
      for (BallId k : kids) all += eval_on_char(u, k);
      EXPECT_NEAR(std::abs(all - eval_on_char(u, b)), 0.0, 1e-12 * (1.0 + std::abs(all)));
    }
  }
}

TEST(DistributionProperty, IndependentOfEnclosingSubtree) {
  uwt::Rng rng(50);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_system(rng);
    const auto& t = s->tree();
    const BallId i0 = positive_ball(rng, t);
    // Coefficients supported on the path above i0 and one random ball.
    std::map<WaveletIndex, Complex> coeffs;
    const BallId j0 = uwt::random_ball(rng, t);
    const BallId top = sup(t, i0, j0);
    for (BallId b = i0;; b = *t.parent(b)) {
      for (int j = 1; j <= s->count(b); ++j) coeffs[{b, j}] = uwt::random_complex(rng);
      if (b == top) break;
    }
    const auto u = GeneralizedFunction::one_dim(s, i0, uwt::random_complex(rng), coeffs);
    const Complex small = eval_on_test(u, indicator_on(path_closure(t, top, {i0, j0}), j0));
    const Complex mid = eval_on_test(u, indicator_on(path_closure(t, t.root(), {i0, j0}), j0));
    const Complex full = eval_on_test(u, indicator_on(RegularSubtree::full(t), j0));
    const Complex direct = eval_on_char(u, j0);
    EXPECT_NEAR(std::abs(small - direct), 0.0, 1e-12 * (1.0 + std::abs(direct)));
    EXPECT_NEAR(std::abs(mid - direct), 0.0, 1e-12 * (1.0 + std::abs(direct)));
    EXPECT_NEAR(std::abs(full - direct), 0.0, 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST(DistributionProperty, ExtendedFamilyHasFullRank) {
  uwt::Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_system(rng, {.max_depth = 2});
    const auto b = random_system(rng, {.max_depth = 2});
    const std::vector<BallId> anchor{positive_ball(rng, a->tree()), positive_ball(rng, b->tree())};
    // Per factor: chi_{I0} then every wavelet.
    auto family = [](const WaveletSystem& s, BallId i0) {
      std::vector<Eigen::VectorXcd> out{uwt::indicator(s.tree(), i0)};
      for (const auto& idx : s.indices()) out.push_back(uwt::wavelet_vector(s.tree(), s.at(idx)));
      return out;
    };
    const auto fa = family(*a, anchor[0]);
    const auto fb = family(*b, anchor[1]);
    const Eigen::Index na = fa[0].size();
    const Eigen::Index nb = fb[0].size();
    Eigen::MatrixXcd m(na * nb, static_cast<Eigen::Index>(fa.size() * fb.size()));
    Eigen::Index col = 0;
    for (const auto& x : fa) {
      for (const auto& y : fb) {
        for (Eigen::Index i = 0; i < na; ++i) m.col(col).segment(i * nb, nb) = x[i] * y;
        ++col;
      }
    }
    EXPECT_EQ(m.cols(), na * nb);
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXcd>(m).rank(), na * nb);
  }
}

TEST(DistributionProperty, BoundaryCoefficientsAreRecovered) {
  // u(conj Psi) for a boundary index equals u_{Ij} times the anchor measures
  // of its j = 0 factors.
  uwt::Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_system(rng, {.max_depth = 2});
    const auto b = random_system(rng, {.max_depth = 2});
    const std::vector<BallId> anchor{positive_ball(rng, a->tree()), positive_ball(rng, b->tree())};
    std::map<MultiIndex, Complex> coeffs;
    for (const auto& ia : a->indices()) {
      coeffs[MultiIndex{{ia.ball, anchor[1]}, {ia.j, 0}}] = uwt::random_complex(rng);
      for (const auto& ib : b->indices()) coeffs[MultiIndex{{ia.ball, ib.ball}, {ia.j, ib.j}}] = uwt::random_complex(rng);
    }
    for (const auto& ib : b->indices()) coeffs[MultiIndex{{anchor[0], ib.ball}, {0, ib.j}}] = uwt::random_complex(rng);
    const GeneralizedFunction u({a, b}, anchor, uwt::random_complex(rng), coeffs);
    const auto r = uwt::naive_realize(u);
    const Eigen::VectorXcd ma = uwt::leaf_measure_vector(a->tree());
    const Eigen::VectorXcd mb = uwt::leaf_measure_vector(b->tree());
    auto test_vec = [&](const WaveletSystem& s, BallId i0, BallId ball, int j) -> Eigen::VectorXcd {
      if (j == 0) return uwt::indicator(s.tree(), i0);
      return uwt::wavelet_vector(s.tree(), s.at({ball, j})).conjugate();
    };
    for (const auto& [idx, c] : coeffs) {
      if (idx.is_wavelet()) continue;
      const auto x = test_vec(*a, anchor[0], idx.vertex[0], idx.j[0]);
      const auto y = test_vec(*b, anchor[1], idx.vertex[1], idx.j[1]);
      Complex pairing{};
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index k = 0; k < y.size(); ++k) {
          pairing += r[i * y.size() + k] * x[i] * y[k] * ma[i] * mb[k];
        }
      }
      double scale = 1.0;
      if (idx.j[0] == 0) scale *= a->tree().measure(anchor[0]);
      if (idx.j[1] == 0) scale *= b->tree().measure(anchor[1]);
      EXPECT_NEAR(std::abs(pairing - c * scale), 0.0, 1e-12 * (1.0 + std::abs(c)));
    }
  }
}
