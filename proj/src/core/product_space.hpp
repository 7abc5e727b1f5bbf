#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "core/pdo.hpp"
#include "core/tree_space.hpp"
#include "core/wavelets.hpp"

namespace uwave {

/// One coordinate of a hypergraph vertex: a ball of the factor tree, or the
/// augmentation vertex K that sits above every ball of a finite-measure
/// factor.
struct Component {
  BallId ball{};
  bool is_k = false;

  static Component k() { return Component{BallId{}, true}; }
  static Component of(BallId b) { return Component{b, false}; }
  // Lexicographic order used for enumeration: balls by id, then K.
  friend auto operator<=>(const Component& a, const Component& b) {
    if (a.is_k != b.is_k) return a.is_k <=> b.is_k;
    return a.is_k ? std::strong_ordering::equal : a.ball <=> b.ball;
  }
  friend bool operator==(const Component& a, const Component& b) { return (a <=> b) == 0; }
};

struct HyperVertex {
  std::vector<Component> components;
  friend auto operator<=>(const HyperVertex&, const HyperVertex&) = default;

  static HyperVertex of(std::span<const BallId> balls);
  std::size_t arity() const { return components.size(); }
};

/// A factor space with its wavelets. `k_present` adds the vertex K carrying
/// the normalized constant A^(-1/2); it requires a positive total measure.
struct AugmentedFactor {
  std::shared_ptr<const WaveletSystem> system;
  bool k_present = false;

  static AugmentedFactor plain(std::shared_ptr<const WaveletSystem> s);
  static AugmentedFactor augmented(std::shared_ptr<const WaveletSystem> s);
  const BallTree& tree() const { return system->tree(); }
};

/// Product of factor trees. Vertices are tuples of components and are never
/// stored; enumeration walks them in lexicographic order.
class ProductHypergraph {
 public:
  explicit ProductHypergraph(std::vector<AugmentedFactor> factors);

  std::size_t arity() const { return factors_.size(); }
  const AugmentedFactor& factor(std::size_t i) const { return factors_.at(i); }

  std::size_t vertex_count() const;
  std::size_t generic_count() const;

  bool contains(const HyperVertex& v) const;
  /// Every component is a non-leaf ball or K. Throws Errc::Parameter on an
  /// arity mismatch.
  bool is_generic(const HyperVertex& v) const;

  void for_each_vertex(const std::function<void(const HyperVertex&)>& fn) const;
  void for_each_generic(const std::function<void(const HyperVertex&)>& fn) const;
  std::vector<HyperVertex> generic_vertices() const;

  /// Throws Errc::Parameter for a vertex of the wrong arity and
  /// Errc::Identity for a component outside its factor.
  void check(const HyperVertex& v) const;

 private:
  void enumerate(bool generic_only, const std::function<void(const HyperVertex&)>& fn) const;
  std::vector<AugmentedFactor> factors_;
};

/// Componentwise sup; K absorbs everything in its factor.
HyperVertex sup_vertex(const ProductHypergraph& g, const HyperVertex& a, const HyperVertex& b);

/// a >> b: a is strictly larger than b in every component.
bool sufficiently_larger(const ProductHypergraph& g, const HyperVertex& a, const HyperVertex& b);

/// A cube-shaped edge starting at its largest corner. Corner `mask` replaces
/// the component on axes[k] by children[k] whenever bit k of mask is set, so
/// corner 0 is the largest vertex and corner 2^d - 1 the smallest.
struct DecreasingEdge {
  std::vector<std::size_t> axes;
  std::vector<BallId> children;
  std::vector<HyperVertex> corners;

  std::size_t dimension() const { return axes.size(); }
  /// Partial order inside the edge: corner a >= corner b iff a's bits are a
  /// subset of b's.
  static bool above_or_equal(std::size_t mask_a, std::size_t mask_b) {
    return (mask_a & ~mask_b) == 0;
  }
};

struct DecreasingEdges {
  int max_dimension = 0;
  std::size_t count = 0;
};

/// Dimension and number of the maximal-dimension decreasing edges at `v`:
/// one axis per non-leaf ball component, one edge per choice of children.
DecreasingEdges decreasing_edges(const ProductHypergraph& g, const HyperVertex& v);

void for_each_decreasing_edge(const ProductHypergraph& g, const HyperVertex& v,
                              const std::function<void(const DecreasingEdge&)>& fn);

/// Tensor product wavelet at a generic vertex; j is 0 on K components.
struct MultiWaveletIndex {
  HyperVertex vertex;
  std::vector<int> j;
  friend auto operator<=>(const MultiWaveletIndex&, const MultiWaveletIndex&) = default;
};

/// All multiwavelets of the hypergraph, ordered by vertex then j.
std::vector<MultiWaveletIndex> multiwavelet_basis(const ProductHypergraph& g);

/// Value of a multiwavelet at a tuple of leaves: the product of the factor
/// values (A^(-1/2) on K components).
Complex evaluate(const ProductHypergraph& g, const MultiWaveletIndex& w,
                 std::span<const BallId> point);

/// Row-major layout of functions on the product of the factors' leaves
/// (factor 0 varies slowest).
class ProductGrid {
 public:
  explicit ProductGrid(std::vector<std::shared_ptr<const BallTree>> trees);

  std::size_t arity() const { return trees_.size(); }
  std::size_t size() const { return size_; }
  std::size_t extent(std::size_t axis) const { return extents_[axis]; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  const BallTree& tree(std::size_t axis) const { return *trees_[axis]; }

  /// Leaf tuple at a flat position.
  std::vector<BallId> point(std::size_t flat) const;
  double measure(std::size_t flat) const;

 private:
  std::vector<std::shared_ptr<const BallTree>> trees_;
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Multiwavelet sampled on the product grid.
std::vector<Complex> sample(const ProductHypergraph& g, const MultiWaveletIndex& w,
                            const ProductGrid& grid);

/// One monomial a * T_{i1} ... T_{ik} (0-based factor indices). An empty
/// factor list is a multiple of the identity.
struct OperatorTerm {
  std::vector<std::size_t> factors;
  Complex coeff{1.0, 0.0};
};

/// Polynomial in one-dimensional operators T_i acting on the i-th variable.
class MultiOperator {
 public:
  struct Factor {
    std::shared_ptr<const WaveletSystem> system;
    Symbol symbol;
    Tail tail = Tail::None;
  };

  MultiOperator(std::vector<Factor> factors, std::vector<OperatorTerm> terms);

  /// The single operator T_1 on one tree.
  static MultiOperator single(std::shared_ptr<const WaveletSystem> system, Symbol symbol,
                              Tail tail = Tail::None);

  std::size_t arity() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  std::span<const OperatorTerm> terms() const { return terms_; }
  const Spectrum& factor_spectrum(std::size_t i) const { return spectra_.at(i); }

  /// Eigenvalue of T_i on a component; zero on K, since T_i kills constants.
  Complex factor_eigenvalue(std::size_t i, Component c) const;

  /// The multilinear form A(Lambda) = sum a * lambda_{i1} ... lambda_{ik}.
  Complex form(std::span<const Complex> lambdas) const;
  /// max over terms of |a| * prod |lambda|; 1 if every term vanishes.
  double term_scale(std::span<const Complex> lambdas) const;

  std::vector<Complex> factor_eigenvalues(const HyperVertex& v) const;

  /// Plain hypergraph of the factors (no augmentation).
  ProductHypergraph hypergraph(bool augmented = false) const;
  ProductGrid grid() const;

  MultiOperator scaled(Complex c) const;

 private:
  std::vector<Factor> factors_;
  std::vector<OperatorTerm> terms_;
  std::vector<Spectrum> spectra_;
};

/// lambda_I = A(lambda_{I^1}, ..., lambda_{I^n}). Throws Errc::Domain for a
/// non-generic vertex.
Complex multi_eigenvalue(const MultiOperator& op, const HyperVertex& v);

/// Dense application on the product grid: each T_i is applied fiber by fiber
/// along its axis with the brute-force one-dimensional operator.
std::vector<Complex> apply_dense(const MultiOperator& op, std::span<const Complex> values);

}  // namespace uwave
