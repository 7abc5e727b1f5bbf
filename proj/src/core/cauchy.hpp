#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/product_space.hpp"

namespace uwave {

/// Default relative threshold below which an eigenvalue counts as zero.
inline constexpr double kDefaultCharTolerance = 1e-9;
/// Non-characteristic eigenvalues below this relative size are reported as
/// ill-conditioned in the residual report.
inline constexpr double kIllConditionedBand = 1e-6;

struct CharacteristicVertex {
  HyperVertex vertex;
  Complex lambda;
  double scale = 1.0;  // max over terms of |a| prod |lambda_i|
};

/// Generic vertices whose eigenvalue satisfies |lambda| <= eps * scale.
std::vector<CharacteristicVertex> characteristics(const MultiOperator& op,
                                                  const ProductHypergraph& g, double eps);
/// Same, over the plain hypergraph of the operator's factors.
std::vector<CharacteristicVertex> characteristics(const MultiOperator& op, double eps);

bool is_characteristic(Complex lambda, double scale, double eps);

struct FreeParamPolicy {
  enum class Mode { Zero, Seeded, Explicit };
  Mode mode = Mode::Zero;
  std::uint64_t seed = 0;
  std::map<MultiIndex, Complex> values;  // Explicit mode; missing entries are 0
};

/// Tu = f with the anchor value u(chi_I0) = u_0 nu(I0) and, in several
/// dimensions, the boundary coefficients of every index with some j^i = 0.
struct CauchyProblem {
  MultiOperator op;
  LizorkinSeries rhs;
  std::vector<BallId> anchor;
  Complex anchor_value{};
  std::map<MultiIndex, Complex> boundary;
  double epsilon = kDefaultCharTolerance;
  FreeParamPolicy free_params;
};

struct SolvabilityViolation {
  MultiIndex index;
  Complex rhs;
  Complex lambda;
  /// lambda vanishes to rounding, not just below the tolerance.
  bool exact = false;
};

struct SolvabilityReport {
  std::vector<SolvabilityViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Every rhs coefficient at a characteristic vertex must satisfy
/// |f_{Ij}| <= eps * max |f|.
SolvabilityReport check_solvability(const CauchyProblem& problem);

struct FreeParam {
  MultiIndex index;
  Complex value;
};

struct ResidualReport {
  /// max |lambda u - f| / max |f| over the rhs indices.
  double max_rel = 0.0;
  std::vector<MultiIndex> ill_conditioned;
  std::vector<std::string> warnings;
};

struct Solution {
  GeneralizedFunction u;
  std::vector<FreeParam> free_params;
  ResidualReport residual;
};

/// Raised by solve() when the rhs violates the necessary conditions. The
/// code is Errc::Unsolvable if some violating eigenvalue vanishes to
/// rounding and Errc::IllConditioned if all of them are merely below the
/// tolerance.
class SolvabilityError : public Error {
 public:
  SolvabilityError(Errc code, const std::string& what, SolvabilityReport report)
      : Error(code, what), report_(std::move(report)) {}
  const SolvabilityReport& report() const { return report_; }

 private:
  SolvabilityReport report_;
};

/// u_{Ij} = f_{Ij} / lambda_I off the characteristics, boundary values from
/// the problem, and free parameters (per the policy) on every wavelet index of
/// every characteristic vertex.
Solution solve(const CauchyProblem& problem);

}  // namespace uwave
