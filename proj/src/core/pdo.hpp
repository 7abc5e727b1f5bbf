#pragma once

#include <complex>
#include <map>
#include <string>
#include <variant>

#include "core/tree_space.hpp"
#include "core/wavelets.hpp"

namespace uwave {

/// Whether eigenvalue sums stop at the root of the tree or continue over the
/// balls above it, as in the homogeneous p-adic extension of the tree.
enum class Tail { None, HomogeneousExtension };

/// Kernel function T(J) of the operator
///   (Tf)(x) = sum_y T(sup(x,y)) (f(x) - f(y)) nu(y).
///
/// Either an explicit table over the balls of one tree, or the
/// scale-homogeneous family T(J) = c * diam(J)^(-beta).
class Symbol {
 public:
  struct Table {
    std::map<BallId, Complex> entries;
  };
  struct Homogeneous {
    Complex c{1.0, 0.0};
    double beta = 0.0;
  };

  static Symbol table(std::map<BallId, Complex> entries);
  static Symbol homogeneous(Complex c, double beta);

  bool is_table() const { return std::holds_alternative<Table>(kind_); }
  bool is_homogeneous() const { return std::holds_alternative<Homogeneous>(kind_); }
  const Table& as_table() const;
  const Homogeneous& as_homogeneous() const;

  /// T(b). Throws Errc::Domain for a table without an entry at `b`.
  Complex value(const BallTree& tree, BallId b) const;

  /// Throws Errc::Domain unless the symbol is defined on every non-leaf ball.
  void check_covers(const BallTree& tree) const;

  /// Tail preference recorded with the symbol (symbol files carry it).
  Tail preferred_tail() const { return tail_; }
  Symbol with_tail(Tail t) const;

  /// Multiplies every value by `factor`.
  Symbol scaled(Complex factor) const;

 private:
  explicit Symbol(std::variant<Table, Homogeneous> kind) : kind_(std::move(kind)) {}
  std::variant<Table, Homogeneous> kind_;
  Tail tail_ = Tail::None;
};

struct ConvergenceReport {
  bool converges = true;
  std::string diagnostic;
};

/// Absolute convergence of sum_{J > root} T(J) (nu(J) - nu(J(root))).
///
/// Without a tail the sum is finite. For the homogeneous extension of a
/// p-adic tree the terms are c (1 - 1/p) p^(k (1 - beta)), k = 1, 2, ...,
/// which converge iff c = 0 or beta > 1.
ConvergenceReport check_convergence(const Symbol& symbol, const BallTree& tree, Tail tail);

/// Closed-form value of the upward tail for a homogeneous symbol on a p-adic
/// tree. Throws Errc::UnsupportedTail or Errc::Divergent.
Complex homogeneous_tail(const Symbol& symbol, const BallTree& tree);

/// lambda_I = T(I) nu(I) + sum_{J > I} T(J) (nu(J) - nu(J(I))), J(I) the
/// maximal subball of J containing I; plus the analytic tail when requested.
Complex eigenvalue(const BallTree& tree, const Symbol& symbol, BallId ball,
                   Tail tail = Tail::None);

/// Eigenvalues of every non-leaf ball.
struct Spectrum {
  std::map<BallId, Complex> eigenvalues;
  Complex at(BallId b) const;
};

Spectrum spectrum(const BallTree& tree, const Symbol& symbol, Tail tail = Tail::None);

/// Brute-force O(n^2) application of the integral operator to a test function,
/// summing over all pairs of leaves. Returns the result on all leaves.
TestFunction apply_dense(const BallTree& tree, const Symbol& symbol, const TestFunction& f);

/// Same as above on raw leaf values (leaves() order).
std::vector<Complex> apply_dense(const BallTree& tree, const Symbol& symbol,
                                 std::span<const Complex> leaf_values);

}  // namespace uwave
