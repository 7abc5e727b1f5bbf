#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "core/pdo.hpp"
#include "core/product_space.hpp"
#include "core/wavelets.hpp"

namespace uwave {

/// Index into the extended family of a product: per factor a ball and an
/// index j, where j >= 1 names a wavelet and j = 0 names the characteristic
/// function of the anchor ball of that factor.
struct MultiIndex {
  std::vector<BallId> vertex;
  std::vector<int> j;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  static MultiIndex one(BallId ball, int j) { return MultiIndex{{ball}, {j}}; }
  std::size_t arity() const { return vertex.size(); }
  /// Every j is non-zero: the index names a genuine (multi)wavelet.
  bool is_wavelet() const;
};

/// Formal wavelet series modulo constants. Only wavelet indices are allowed
/// (every j >= 1). Iteration is lexicographic in (vertex, j).
struct LizorkinSeries {
  std::size_t arity = 1;
  std::map<MultiIndex, Complex> coeffs;
};

/// Generalized function in series form around an anchor ball of positive
/// measure:
///   u = sum_{I,j} u_{Ij} (x)_{i: j^i != 0} (psi_{I^i j^i} - psi_{I^i j^i}(chi_{I0^i}) / nu(I0^i))
/// where the anchor value u_0 is the coefficient of the all-zero index at the
/// anchor vertex. Coefficients with some j^i = 0 must sit on the anchor ball
/// in that factor.
class GeneralizedFunction {
 public:
  using Factors = std::vector<std::shared_ptr<const WaveletSystem>>;

  /// Throws Errc::Anchor if the anchor has measure zero and Errc::Domain for
  /// a coefficient whose extended function vanishes or does not exist.
  GeneralizedFunction(Factors factors, std::vector<BallId> anchor, Complex anchor_value,
                      std::map<MultiIndex, Complex> coeffs);

  static GeneralizedFunction one_dim(std::shared_ptr<const WaveletSystem> system, BallId anchor,
                                     Complex anchor_value,
                                     const std::map<WaveletIndex, Complex>& coeffs);

  std::size_t arity() const { return factors_.size(); }
  const WaveletSystem& factor(std::size_t i) const { return *factors_.at(i); }
  const Factors& factors() const { return factors_; }
  std::span<const BallId> anchor() const { return anchor_; }
  Complex anchor_value() const { return anchor_value_; }
  const std::map<MultiIndex, Complex>& coeffs() const { return coeffs_; }
  /// Stored coefficient, the anchor value for the all-zero anchor index, or 0.
  Complex coefficient(const MultiIndex& idx) const;
  double anchor_measure() const;

 private:
  Factors factors_;
  std::vector<BallId> anchor_;
  Complex anchor_value_;
  std::map<MultiIndex, Complex> coeffs_;
};

/// u(chi_J0) for a one-dimensional u by the finite sum over the balls
/// strictly between J0 (resp. the anchor) and sup(J0, anchor).
Complex eval_on_char(const GeneralizedFunction& u, BallId j0);

/// u(chi_J0) on a product ball J0 = J0^1 x ... x J0^n. Only indices that
/// satisfy, in every factor, one of
///   j != 0 and J0 < I <= sup(J0, I0),   j != 0 and I0 < I <= sup(J0, I0),
///   j == 0 and I == I0
/// are visited; the pairing factorizes over the factors.
Complex eval_on_char_nd(const GeneralizedFunction& u, std::span<const BallId> j0);

/// u(f) for a one-dimensional test function: f is split into its mean part
/// and its components along the conjugate wavelets, and u is applied
/// termwise.
Complex eval_on_test(const GeneralizedFunction& u, const TestFunction& f);
Complex eval_on_test(const GeneralizedFunction& u, const WaveletExpansion& f);

/// phi(f) = sum phi_{Ij} f_{Ij} for a mean-zero f. Throws Errc::Domain if the
/// mean coefficient of f is not zero.
Complex lizorkin_pair(const LizorkinSeries& phi, const WaveletExpansion& f);
Complex lizorkin_pair(const LizorkinSeries& phi, const std::map<MultiIndex, Complex>& f);

/// Tu as a Lizorkin series: lambda_I u_{Ij} on every wavelet index.
LizorkinSeries apply_operator(const GeneralizedFunction& u, const Spectrum& spectrum);
LizorkinSeries apply_operator(const GeneralizedFunction& u, const MultiOperator& op);

/// u as a function on the product of the factors' leaves (ProductGrid layout);
/// u(f) = sum_x u(x) f(x) nu(x) on this grid.
std::vector<Complex> realize(const GeneralizedFunction& u);

}  // namespace uwave
