#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/wavelets.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace uwave;

namespace {

BallTree two_leaf_tree(double m1, double m2) {
  const std::vector<VertexSpec> v{
      {0, std::nullopt, m1 + m2, 1.0}, {1, 0u, m1, 0.5}, {2, 0u, m2, 0.5}};
  return BallTree::from_vertices(v);
}

// Gram matrix of all wavelets plus the normalized constant, on the leaves.
Eigen::MatrixXcd gram(const WaveletSystem& s) {
  const BallTree& t = s.tree();
  const auto n = static_cast<Eigen::Index>(t.leaves().size());
  Eigen::MatrixXcd b(n, static_cast<Eigen::Index>(s.size()) + 1);
  b.col(0).setConstant(s.constant_value());
  for (std::size_t k = 0; k < s.size(); ++k) {
    b.col(static_cast<Eigen::Index>(k) + 1) = uwt::wavelet_vector(t, s.at(s.indices()[k]));
  }
  const Eigen::VectorXcd m = uwt::leaf_measure_vector(t);
  return b.adjoint() * m.asDiagonal() * b;
}

}  // namespace

TEST(WaveletBasis, EqualMeasurePairIsPlusMinus) {
  const BallTree t = build_padic_tree(2, 1);
  const auto ws = wavelet_basis(t, t.root());
  ASSERT_EQ(ws.size(), 1u);
  const double m = 0.5;
  const double a = 1.0 / std::sqrt(2 * m);
  EXPECT_NEAR(std::abs(ws[0].values[0]), a, 1e-15);
  EXPECT_NEAR(std::abs(ws[0].values[0] + ws[0].values[1]), 0.0, 1e-15);
  // evaluate on the leaves and outside
  EXPECT_NEAR(std::abs(evaluate(ws[0], Point{t.leaves()[0]}, t) - a), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate(ws[0], Point{t.leaves()[1]}, t) + a), 0.0, 1e-15);
}

TEST(WaveletBasis, OutsideTheBallIsZero) {
  const BallTree t = build_padic_tree(2, 2);
  const BallId k0 = t.children(t.root())[0];
  const BallId k1 = t.children(t.root())[1];
  const auto ws = wavelet_basis(t, k0);
  for (BallId leaf : t.children(k1)) EXPECT_EQ(evaluate(ws[0], Point{leaf}, t), Complex{});
  EXPECT_EQ(value_on_ball(ws[0], k1, t), Complex{});
}

TEST(WaveletBasis, TernaryCharacters) {
  const BallTree t = build_padic_tree(3, 1);
  const auto ws = wavelet_basis(t, t.root());
  ASSERT_EQ(ws.size(), 2u);
  const double m = 1.0 / 3.0;
  for (int j = 1; j <= 2; ++j) {
    for (int k = 0; k < 3; ++k) {
      const Complex expect = std::polar(1.0 / std::sqrt(3 * m), 2 * std::numbers::pi * j * k / 3);
      EXPECT_NEAR(std::abs(ws[j - 1].values[k] - expect), 0.0, 1e-14);
    }
  }
  // Direct inner products.
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Complex ip{};
      for (int k = 0; k < 3; ++k) ip += std::conj(ws[a].values[k]) * ws[b].values[k] * m;
      EXPECT_NEAR(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(WaveletBasis, UnequalPairMatchesClosedForm) {
  const BallTree t = two_leaf_tree(1.0, 2.0);
  const auto ws = wavelet_basis(t, t.root());
  ASSERT_EQ(ws.size(), 1u);
  // a + 2b = 0, a^2 + 2 b^2 = 1
  EXPECT_NEAR(ws[0].values[0].real(), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(ws[0].values[1].real(), -1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_EQ(ws[0].values[0].imag(), 0.0);
}

TEST(WaveletBasis, ZeroMeasureSubballIsSkipped) {
  const std::vector<VertexSpec> v{{0, std::nullopt, 2.0, 1.0},
                                  {1, 0u, 1.0, 0.5},
                                  {2, 0u, 0.0, 0.5},
                                  {3, 0u, 1.0, 0.5}};
  const BallTree t = BallTree::from_vertices(v);
  const auto ws = wavelet_basis(t, t.root());
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].values[1], Complex{});
}

TEST(WaveletBasis, DegenerateBall) {
  const std::vector<VertexSpec> v{
      {0, std::nullopt, 1.0, 1.0}, {1, 0u, 1.0, 0.5}, {2, 0u, 0.0, 0.5}};
  const BallTree t = BallTree::from_vertices(v);
  try {
    wavelet_basis(t, t.root());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Degenerate);
  }
  const WaveletSystem s(uwt::shared_tree(BallTree::from_vertices(v)));
  EXPECT_EQ(s.size(), 0u);
}

TEST(Analyze, ConstantHasOnlyMean) {
  const auto t = uwt::shared_tree(build_padic_tree(2, 2));
  const WaveletSystem s(t);
  const Complex c{2.0, -1.0};
  const auto e = analyze(TestFunction::on_leaves(*t, std::vector<Complex>(4, c)), s);
  EXPECT_NEAR(std::abs(e.mean - c), 0.0, 1e-15);  // c * A^(1/2), A = 1
  for (const auto& [idx, z] : e.coeffs) EXPECT_NEAR(std::abs(z), 0.0, 1e-15);
}

TEST(Analyze, SingleWaveletGivesIndicator) {
  const auto t = uwt::shared_tree(build_padic_tree(3, 2));
  const WaveletSystem s(t);
  for (const auto& target : s.indices()) {
    std::vector<Complex> vals;
    for (BallId l : t->leaves()) vals.push_back(evaluate(s.at(target), Point{l}, *t));
    const auto e = analyze(TestFunction::on_leaves(*t, vals), s);
    EXPECT_NEAR(std::abs(e.mean), 0.0, 1e-14);
    for (const auto& [idx, z] : e.coeffs) {
      EXPECT_NEAR(std::abs(z - Complex(idx == target ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(Analyze, RoundTripSixteenLeaves) {
  const auto t = uwt::shared_tree(build_padic_tree(2, 4));
  const WaveletSystem s(t);
  uwt::Rng rng(7);
  const auto vals = uwt::random_leaf_values(rng, *t);
  const TestFunction f = TestFunction::on_leaves(*t, vals);
  const auto e = analyze(f, s);
  const TestFunction g = synthesize(e, f.subtree(), s);
  double err = 0.0;
  double norm = 0.0;
  const auto back = g.on_host_leaves();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const double m = t->measure(t->leaves()[k]);
    err += std::norm(back[k] - vals[k]) * m;
    norm += std::norm(vals[k]) * m;
  }
  EXPECT_LE(std::sqrt(err), 1e-10 * std::sqrt(norm));
}

TEST(Analyze, SubtreeTestFunction) {
  const auto t = uwt::shared_tree(build_padic_tree(2, 3));
  const WaveletSystem s(t);
  const BallId k0 = t->children(t->root())[0];
  std::vector<BallId> m{k0};
  for (BallId c : t->children(k0)) m.push_back(c);
  const RegularSubtree sub(*t, m);
  const TestFunction f(sub, {Complex{1.0, 0.0}, Complex{3.0, 0.0}});
  const auto e = analyze(f, s);
  // Coefficients on k0 and on the root (strict ancestor of the top).
  EXPECT_TRUE(e.coeffs.contains(WaveletIndex{k0, 1}));
  EXPECT_TRUE(e.coeffs.contains(WaveletIndex{t->root(), 1}));
  const auto back = synthesize(e, sub, s).on_host_leaves();
  const auto orig = f.on_host_leaves();
  for (std::size_t k = 0; k < back.size(); ++k) EXPECT_NEAR(std::abs(back[k] - orig[k]), 0.0, 1e-14);
}

TEST(Synthesize, CoefficientOutsideSubtreeIsDomainError) {
  const auto t = uwt::shared_tree(build_padic_tree(2, 3));
  const WaveletSystem s(t);
  const BallId k0 = t->children(t->root())[0];
  const BallId k1 = t->children(t->root())[1];
  std::vector<BallId> m{k0};
  for (BallId c : t->children(k0)) m.push_back(c);
  const RegularSubtree sub(*t, m);
  WaveletExpansion e;
  e.coeffs[{k1, 1}] = 1.0;
  try {
    synthesize(e, sub, s);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::Domain);
  }
}

TEST(IntegralOver, MatchesLeafSum) {
  uwt::Rng rng(8);
  const auto t = uwt::shared_tree(uwt::random_tree(rng));
  const WaveletSystem s(t);
  for (const auto& idx : s.indices()) {
    const auto v = uwt::wavelet_vector(*t, s.at(idx));
    for (std::uint32_t b = 0; b < t->size(); ++b) {
      EXPECT_NEAR(std::abs(integral_over(s.at(idx), BallId{b}, *t) -
                           uwt::naive_integral(*t, v, BallId{b})),
                  0.0, 1e-13);
    }
  }
}

TEST(WaveletProperty, SingleWaveletInvariants) {
  uwt::Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const BallTree t = uwt::random_tree(rng);
    for (BallId b : t.interior()) {
      const auto ws = wavelet_basis(t, b);
      EXPECT_EQ(ws.size(), t.children(b).size() - 1);
      for (const auto& w : ws) {
        Complex mean{};
        double norm = 0.0;
        for (std::size_t k = 0; k < w.values.size(); ++k) {
          const double m = t.measure(t.children(b)[k]);
          mean += w.values[k] * m;
          norm += std::norm(w.values[k]) * m;
        }
        EXPECT_NEAR(std::abs(mean), 0.0, 1e-12);
        EXPECT_NEAR(norm, 1.0, 1e-12);
      }
    }
  }
}

TEST(WaveletProperty, GramIsIdentity) {
  uwt::Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = uwt::shared_tree(uwt::random_tree(rng));
    const WaveletSystem s(t);
    EXPECT_EQ(s.size() + 1, t->leaves().size());
    const auto g = gram(s);
    const double err = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    EXPECT_LE(err, 1e-10) << "trial " << trial;
  }
}

TEST(WaveletProperty, Parseval) {
  uwt::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = uwt::shared_tree(uwt::random_tree(rng));
    const WaveletSystem s(t);
    const auto vals = uwt::random_leaf_values(rng, *t);
    const auto e = analyze(TestFunction::on_leaves(*t, vals), s);
    double lhs = std::norm(e.mean);
    for (const auto& [idx, z] : e.coeffs) lhs += std::norm(z);
    double rhs = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) rhs += std::norm(vals[k]) * t->measure(t->leaves()[k]);
    EXPECT_NEAR(lhs, rhs, 1e-10 * rhs);
  }
}
