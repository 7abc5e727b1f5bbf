#include "core/cauchy.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>
#include <set>

namespace uwave {

namespace {

// Eigenvalues this small relative to their term scale are zero up to rounding.
constexpr double kRoundoffFloor = 64 * DBL_EPSILON;

std::string describe(const MultiIndex& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.arity(); ++i) {
    s += (i ? ", " : "") + std::to_string(idx.vertex[i].value) + ":" + std::to_string(idx.j[i]);
  }
  return s + ")";
}

void validate(const CauchyProblem& p) {
  const std::size_t n = p.op.arity();
  if (p.rhs.arity != n) {
    fail(Errc::Parameter, "rhs arity " + std::to_string(p.rhs.arity) + " does not match " +
                              std::to_string(n) + " operator factors");
  }
  if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) {
    fail(Errc::Parameter, "characteristic tolerance must be finite and non-negative");
  }
  for (const auto& [idx, c] : p.rhs.coeffs) {
    if (idx.arity() != n || idx.j.size() != n) {
      fail(Errc::Parameter, "rhs index " + describe(idx) + " has the wrong arity");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (idx.j[i] <= 0 || !p.op.factor(i).system->has({idx.vertex[i], idx.j[i]})) {
        fail(Errc::Domain, "rhs index " + describe(idx) + " is not a wavelet index");
      }
    }
  }
  for (const auto& [idx, c] : p.boundary) {
    if (idx.is_wavelet()) {
      fail(Errc::Domain, "boundary index " + describe(idx) + " has no j = 0 component");
    }
  }
}

struct VertexEigen {
  Complex lambda;
  double scale;
};

VertexEigen vertex_eigen(const MultiOperator& op, const std::vector<BallId>& vertex) {
  const auto lambdas = op.factor_eigenvalues(HyperVertex::of(vertex));
  return {op.form(lambdas), op.term_scale(lambdas)};
}

double rhs_norm(const LizorkinSeries& f) {
  double m = 0.0;
  for (const auto& [idx, c] : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

// Every wavelet index (all j >= 1) at a vertex of balls.
std::vector<MultiIndex> wavelet_indices(const MultiOperator& op, const std::vector<BallId>& vertex) {
  std::vector<int> counts;
  for (std::size_t i = 0; i < op.arity(); ++i) {
    counts.push_back(op.factor(i).system->count(vertex[i]));
    if (counts.back() == 0) return {};
  }
  std::vector<MultiIndex> out;
  MultiIndex idx{vertex, std::vector<int>(op.arity(), 1)};
  while (true) {
    out.push_back(idx);
    std::size_t i = op.arity();
    while (true) {
      if (i == 0) return out;
      --i;
      if (++idx.j[i] <= counts[i]) break;
      idx.j[i] = 1;
    }
  }
}

std::vector<BallId> balls_of(const HyperVertex& v) {
  std::vector<BallId> out;
  for (const Component& c : v.components) out.push_back(c.ball);
  return out;
}

}  // namespace

bool is_characteristic(Complex lambda, double scale, double eps) {
  return std::abs(lambda) <= eps * scale;
}

std::vector<CharacteristicVertex> characteristics(const MultiOperator& op,
                                                  const ProductHypergraph& g, double eps) {
  if (g.arity() != op.arity()) fail(Errc::Parameter, "hypergraph and operator arity differ");
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (&g.factor(i).tree() != &op.factor(i).system->tree()) {
      fail(Errc::Domain, "hypergraph factor " + std::to_string(i + 1) +
                             " is not the operator's factor");
    }
  }
  std::vector<CharacteristicVertex> out;
  g.for_each_generic([&](const HyperVertex& v) {
    const auto lambdas = op.factor_eigenvalues(v);
    const Complex lambda = op.form(lambdas);
    const double scale = op.term_scale(lambdas);
    if (is_characteristic(lambda, scale, eps)) out.push_back({v, lambda, scale});
  });
  return out;
}

std::vector<CharacteristicVertex> characteristics(const MultiOperator& op, double eps) {
  return characteristics(op, op.hypergraph(false), eps);
}

SolvabilityReport check_solvability(const CauchyProblem& problem) {
  validate(problem);
  SolvabilityReport report;
  const double bound = problem.epsilon * rhs_norm(problem.rhs);
  for (const auto& [idx, f] : problem.rhs.coeffs) {
    const auto [lambda, scale] = vertex_eigen(problem.op, idx.vertex);
    if (!is_characteristic(lambda, scale, problem.epsilon)) continue;
    if (std::abs(f) > bound) {
      report.violations.push_back(
          {idx, f, lambda, std::abs(lambda) <= kRoundoffFloor * scale});
    }
  }
  return report;
}

Solution solve(const CauchyProblem& problem) {
  const SolvabilityReport report = check_solvability(problem);
  if (!report.ok()) {
    const bool exact = std::any_of(report.violations.begin(), report.violations.end(),
                                   [](const auto& v) { return v.exact; });
    std::string msg = exact ? "rhs is nonzero at characteristic indices:"
                            : "rhs is nonzero where the eigenvalue is below tolerance:";
    for (const auto& v : report.violations) msg += " " + describe(v.index);
    throw SolvabilityError(exact ? Errc::Unsolvable : Errc::IllConditioned, msg, report);
  }

  const MultiOperator& op = problem.op;
  const double eps = problem.epsilon;
  ResidualReport residual;
  std::map<MultiIndex, Complex> coeffs = problem.boundary;

  for (const auto& [idx, f] : problem.rhs.coeffs) {
    const auto [lambda, scale] = vertex_eigen(op, idx.vertex);
    if (is_characteristic(lambda, scale, eps)) {
      if (f != Complex{}) {
        residual.warnings.push_back("rhs coefficient at characteristic index " + describe(idx) +
                                    " is below tolerance and was replaced by a free parameter");
      }
      continue;
    }
    if (std::abs(lambda) < kIllConditionedBand * scale) {
      residual.ill_conditioned.push_back(idx);
      residual.warnings.push_back("eigenvalue at " + describe(idx) +
                                  " is close to zero relative to the operator scale");
    }
    coeffs[idx] = f / lambda;
  }

  // Free parameters on every characteristic index.
  std::vector<FreeParam> free_params;
  std::set<MultiIndex> characteristic_indices;
  for (const auto& cv : characteristics(op, eps)) {
    for (auto& idx : wavelet_indices(op, balls_of(cv.vertex))) {
      characteristic_indices.insert(std::move(idx));
    }
  }
  const auto& policy = problem.free_params;
  for (const auto& [idx, v] : policy.values) {
    if (!characteristic_indices.contains(idx)) {
      fail(Errc::Domain, "free parameter " + describe(idx) + " is not a characteristic index");
    }
  }
  std::mt19937_64 rng(policy.seed);
  std::normal_distribution<double> normal;
  for (const MultiIndex& idx : characteristic_indices) {
    Complex value{};
    switch (policy.mode) {
      case FreeParamPolicy::Mode::Zero:
        break;
      case FreeParamPolicy::Mode::Seeded: {
        const double re = normal(rng);
        const double im = normal(rng);
        value = {re, im};
        break;
      }
      case FreeParamPolicy::Mode::Explicit: {
        const auto it = policy.values.find(idx);
        if (it != policy.values.end()) value = it->second;
        break;
      }
    }
    free_params.push_back({idx, value});
    if (value != Complex{}) {
      coeffs[idx] = value;
    } else {
      coeffs.erase(idx);
    }
  }

  GeneralizedFunction u(
      [&] {
        GeneralizedFunction::Factors fs;
        for (std::size_t i = 0; i < op.arity(); ++i) fs.push_back(op.factor(i).system);
        return fs;
      }(),
      problem.anchor, problem.anchor_value, std::move(coeffs));

  const LizorkinSeries tu = apply_operator(u, op);
  const double norm = rhs_norm(problem.rhs);
  if (norm > 0.0) {
    for (const auto& [idx, f] : problem.rhs.coeffs) {
      if (characteristic_indices.contains(idx)) continue;
      const auto it = tu.coeffs.find(idx);
      const Complex got = it == tu.coeffs.end() ? Complex{} : it->second;
      residual.max_rel = std::max(residual.max_rel, std::abs(got - f) / norm);
    }
  }

  return Solution{std::move(u), std::move(free_params), std::move(residual)};
}

}  // namespace uwave
