#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "core/tree_space.hpp"

namespace uwave {

using Complex = std::complex<double>;

/// Identifies a wavelet: its ball and a 1-based index inside that ball.
struct WaveletIndex {
  BallId ball;
  int j = 1;
  friend auto operator<=>(const WaveletIndex&, const WaveletIndex&) = default;
};

/// Zero-mean, unit-norm function constant on the maximal subballs of `ball`
/// and zero outside it. `values` follows the stored child order; subballs of
/// measure zero carry the value 0.
struct Wavelet {
  BallId ball;
  int j = 1;
  std::vector<Complex> values;
};

/// Orthonormal basis of the zero-mean functions spanned by the maximal
/// subballs of `ball`.
///
/// With all positive subball measures equal, the character basis
/// values(I_k) = (p m)^(-1/2) exp(2 pi i j k / p) is used. Otherwise the
/// differences chi_k / nu_k - chi_{k+1} / nu_{k+1} are orthonormalized in
/// child order, which yields the real Helmert-type family
/// (chi_1 + ... + chi_k) / M_k - chi_{k+1} / nu_{k+1}, normalized.
///
/// Subballs of measure zero are skipped. Throws Errc::Degenerate when fewer
/// than two subballs have positive measure.
std::vector<Wavelet> wavelet_basis(const BallTree& tree, BallId ball);

/// Value of the wavelet at a point; zero outside the wavelet's ball.
Complex evaluate(const Wavelet& w, Point x, const BallTree& tree);

/// Value of the wavelet on a ball on which it is constant: a ball strictly
/// inside w.ball or disjoint from it. Throws Errc::Domain if `b` contains
/// w.ball.
Complex value_on_ball(const Wavelet& w, BallId b, const BallTree& tree);

/// Integral of the wavelet over the ball `b` (the pairing psi(chi_b)).
Complex integral_over(const Wavelet& w, BallId b, const BallTree& tree);

/// Every wavelet of a tree, computed once. Balls whose positive-measure
/// subballs number fewer than two carry no wavelets.
class WaveletSystem {
 public:
  explicit WaveletSystem(std::shared_ptr<const BallTree> tree);

  const BallTree& tree() const { return *tree_; }
  const std::shared_ptr<const BallTree>& tree_ptr() const { return tree_; }

  std::span<const Wavelet> at_ball(BallId b) const;
  const Wavelet& at(WaveletIndex idx) const;
  bool has(WaveletIndex idx) const;
  /// Number of wavelets attached to `b`.
  int count(BallId b) const { return static_cast<int>(at_ball(b).size()); }

  /// All wavelet indices, ordered by (ball id, j).
  std::span<const WaveletIndex> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

  /// The normalized constant A^(-1/2), A the total measure.
  double constant_value() const { return constant_; }

 private:
  std::shared_ptr<const BallTree> tree_;
  std::vector<std::vector<Wavelet>> by_ball_;
  std::vector<WaveletIndex> indices_;
  double constant_ = 0.0;
};

/// A test function: constant on every minimal ball of a regular subtree and
/// zero outside its top ball. `values` is aligned with subtree.minimal().
class TestFunction {
 public:
  TestFunction(RegularSubtree subtree, std::vector<Complex> values);

  /// Function given by its values on all leaves of `tree`, in leaves() order.
  static TestFunction on_leaves(const BallTree& tree, std::vector<Complex> values);

  const RegularSubtree& subtree() const { return subtree_; }
  std::span<const Complex> values() const { return values_; }

  /// Value at a leaf of the host tree.
  Complex at(Point x) const;
  /// Values on every host leaf, in leaves() order.
  std::vector<Complex> on_host_leaves() const;

 private:
  RegularSubtree subtree_;
  std::vector<Complex> values_;
  std::vector<std::size_t> minimal_of_leaf_;  // index into values_, or npos
};

/// f = mean * A^(-1/2) + sum coeffs[I,j] * psi_{Ij}.
struct WaveletExpansion {
  Complex mean{};
  std::map<WaveletIndex, Complex> coeffs;
};

/// Coefficients f_{Ij} = <psi_{Ij}, f> (conjugate-linear in psi) for every
/// wavelet at a non-minimal member of the subtree or at a strict ancestor of
/// its top ball, plus the mean coefficient <A^(-1/2), f>.
WaveletExpansion analyze(const TestFunction& f, const WaveletSystem& system);

/// Inverse of analyze. Throws Errc::Domain for a coefficient whose ball is
/// neither a non-minimal member of `subtree` nor an ancestor of its top.
TestFunction synthesize(const WaveletExpansion& e, const RegularSubtree& subtree,
                        const WaveletSystem& system);

}  // namespace uwave
