#include "uwave/uwave.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <span>
#include <string>

#include "core/cauchy.hpp"
#include "core/distributions.hpp"
#include "core/io.hpp"

using uwave::BallId;
using uwave::Complex;
using uwave::Errc;
using uwave::io::json;

struct uwave_space {
  std::shared_ptr<const uwave::BallTree> tree;
};

struct uwave_symbol {
  uwave::Symbol symbol;
};

struct uwave_operator {
  uwave::MultiOperator op;
};

struct uwave_problem {
  uwave::CauchyProblem problem;
};

struct uwave_solution {
  uwave::GeneralizedFunction u;
  json doc;
};

namespace {

thread_local std::string last_error;

uwave_status status_of(Errc code) {
  switch (code) {
    case Errc::Parameter: return UWAVE_E_PARAMETER;
    case Errc::Parse: return UWAVE_E_PARSE;
    case Errc::Identity: return UWAVE_E_IDENTITY;
    case Errc::Domain: return UWAVE_E_DOMAIN;
    case Errc::Degenerate: return UWAVE_E_DEGENERATE;
    case Errc::Anchor: return UWAVE_E_ANCHOR;
    case Errc::UnsupportedTail: return UWAVE_E_UNSUPPORTED_TAIL;
    case Errc::Divergent: return UWAVE_E_DIVERGENT;
    case Errc::Unsolvable: return UWAVE_E_UNSOLVABLE;
    case Errc::IllConditioned: return UWAVE_E_ILL_CONDITIONED;
    case Errc::Io: return UWAVE_E_IO;
  }
  return UWAVE_E_INTERNAL;
}

template <typename F>
uwave_status guarded(F&& fn) {
  last_error.clear();
  try {
    fn();
    return UWAVE_OK;
  } catch (const uwave::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return UWAVE_E_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) uwave::fail(Errc::Parameter, std::string(what) + " is null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const json& j, char** out) {
  require(out, "output pointer");
  *out = copy_string(j.dump());
}

uwave::io::Source text_source(const char* text, const char* base_dir) {
  require(text, "json text");
  return {uwave::io::parse_text(text, "<json>"),
          base_dir ? std::filesystem::path(base_dir) : std::filesystem::current_path()};
}

std::shared_ptr<const uwave::BallTree> tree_or_null(const uwave_space* s) {
  return s ? s->tree : nullptr;
}

std::vector<BallId> ids(const uint32_t* vertex, size_t arity) {
  require(vertex, "vertex");
  std::vector<BallId> out;
  for (size_t i = 0; i < arity; ++i) out.push_back(BallId{vertex[i]});
  return out;
}

Complex eval_at(const uwave::GeneralizedFunction& u, std::span<const BallId> v) {
  if (v.size() != u.arity()) {
    uwave::fail(Errc::Parameter, "vertex arity " + std::to_string(v.size()) +
                                     " does not match the solution's " +
                                     std::to_string(u.arity()));
  }
  return u.arity() == 1 ? uwave::eval_on_char(u, v[0]) : uwave::eval_on_char_nd(u, v);
}

}  // namespace

extern "C" {

const char* uwave_status_name(uwave_status status) {
  switch (status) {
    case UWAVE_OK: return "ok";
    case UWAVE_E_PARAMETER: return "parameter";
    case UWAVE_E_PARSE: return "parse";
    case UWAVE_E_IDENTITY: return "identity";
    case UWAVE_E_DOMAIN: return "domain";
    case UWAVE_E_DEGENERATE: return "degenerate";
    case UWAVE_E_ANCHOR: return "anchor";
    case UWAVE_E_UNSUPPORTED_TAIL: return "unsupported-tail";
    case UWAVE_E_DIVERGENT: return "divergent";
    case UWAVE_E_UNSOLVABLE: return "unsolvable";
    case UWAVE_E_ILL_CONDITIONED: return "ill-conditioned";
    case UWAVE_E_IO: return "io";
    case UWAVE_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* uwave_last_error(void) { return last_error.c_str(); }

void uwave_string_free(char* s) { std::free(s); }

uwave_status uwave_space_load(const char* source, uwave_space** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "output pointer");
    *out = new uwave_space{uwave::io::load_space(uwave::io::source_from_arg(source))};
  });
}

uwave_status uwave_space_from_json(const char* text, const char* base_dir, uwave_space** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new uwave_space{uwave::io::load_space(text_source(text, base_dir))};
  });
}

void uwave_space_free(uwave_space* space) { delete space; }

uwave_status uwave_space_counts(const uwave_space* space, size_t* vertices, size_t* leaves) {
  return guarded([&] {
    require(space, "space");
    if (vertices) *vertices = space->tree->size();
    if (leaves) *leaves = space->tree->leaves().size();
  });
}

uwave_status uwave_space_sup(const uwave_space* space, uint32_t a, uint32_t b, uint32_t* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "output pointer");
    *out = uwave::sup(*space->tree, BallId{a}, BallId{b}).value;
  });
}

uwave_status uwave_space_measure(const uwave_space* space, uint32_t ball, double* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "output pointer");
    space->tree->check(BallId{ball});
    *out = space->tree->measure(BallId{ball});
  });
}

uwave_status uwave_space_report(const uwave_space* space, const uint32_t* members,
                                size_t member_count, char** json_out) {
  return guarded([&] {
    require(space, "space");
    const uwave::BallTree& t = *space->tree;
    json zero = json::array();
    for (BallId b : t.zero_measure_balls()) zero.push_back(b.value);
    json r = {{"vertices", t.size()},
              {"leaves", t.leaves().size()},
              {"height", t.height()},
              {"total_measure", t.total_measure()},
              {"zero_measure_balls", std::move(zero)}};
    if (members != nullptr) {
      const auto balls = ids(members, member_count);
      for (BallId b : balls) t.check(b);
      const auto report = uwave::validate_regular_subtree(t, balls);
      json v = json::array();
      for (const auto& x : report.violations) {
        json w = json::array();
        for (BallId b : x.witness) w.push_back(b.value);
        v.push_back({{"condition", x.condition}, {"witness", std::move(w)}, {"message", x.message}});
      }
      r["subtree"] = {{"ok", report.ok()}, {"violations", std::move(v)}};
    }
    emit(r, json_out);
  });
}

uwave_status uwave_space_wavelets(const uwave_space* space, char** json_out) {
  return guarded([&] {
    require(space, "space");
    const uwave::WaveletSystem system(space->tree);
    json rows = json::array();
    for (const auto& idx : system.indices()) {
      json values = json::array();
      for (Complex z : system.at(idx).values) values.push_back(uwave::io::complex_to_json(z));
      rows.push_back({{"ball", idx.ball.value}, {"j", idx.j}, {"values", std::move(values)}});
    }
    emit(rows, json_out);
  });
}

uwave_status uwave_space_to_json(const uwave_space* space, char** json_out) {
  return guarded([&] {
    require(space, "space");
    emit(uwave::io::space_to_json(*space->tree), json_out);
  });
}

uwave_status uwave_symbol_load(const char* source, uwave_symbol** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "output pointer");
    *out = new uwave_symbol{uwave::io::load_symbol(uwave::io::source_from_arg(source))};
  });
}

uwave_status uwave_symbol_from_json(const char* text, const char* base_dir, uwave_symbol** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new uwave_symbol{uwave::io::load_symbol(text_source(text, base_dir))};
  });
}

void uwave_symbol_free(uwave_symbol* symbol) { delete symbol; }

uwave_status uwave_eigenvalue(const uwave_space* space, const uwave_symbol* symbol,
                              uint32_t ball, double* re, double* im) {
  return guarded([&] {
    require(space, "space");
    require(symbol, "symbol");
    const Complex z = uwave::eigenvalue(*space->tree, symbol->symbol, BallId{ball},
                                        symbol->symbol.preferred_tail());
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

uwave_status uwave_spectrum(const uwave_space* space, const uwave_symbol* symbol,
                            char** json_out) {
  return guarded([&] {
    require(space, "space");
    require(symbol, "symbol");
    const auto s =
        uwave::spectrum(*space->tree, symbol->symbol, symbol->symbol.preferred_tail());
    json rows = json::array();
    for (const auto& [b, z] : s.eigenvalues) {
      rows.push_back({{"ball", b.value}, {"re", z.real()}, {"im", z.imag()}});
    }
    emit(rows, json_out);
  });
}

uwave_status uwave_operator_load(const char* source, const uwave_space* default_space,
                                 uwave_operator** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "output pointer");
    *out = new uwave_operator{
        uwave::io::load_operator(uwave::io::source_from_arg(source), tree_or_null(default_space))};
  });
}

uwave_status uwave_operator_from_json(const char* text, const char* base_dir,
                                      const uwave_space* default_space, uwave_operator** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new uwave_operator{
        uwave::io::load_operator(text_source(text, base_dir), tree_or_null(default_space))};
  });
}

void uwave_operator_free(uwave_operator* op) { delete op; }

uwave_status uwave_operator_arity(const uwave_operator* op, size_t* out) {
  return guarded([&] {
    require(op, "operator");
    require(out, "output pointer");
    *out = op->op.arity();
  });
}

uwave_status uwave_operator_eigenvalue(const uwave_operator* op, const uint32_t* vertex,
                                       size_t arity, double* re, double* im) {
  return guarded([&] {
    require(op, "operator");
    const auto v = ids(vertex, arity);
    const Complex z = uwave::multi_eigenvalue(op->op, uwave::HyperVertex::of(v));
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

uwave_status uwave_operator_characteristics(const uwave_operator* op, double epsilon,
                                            char** json_out) {
  return guarded([&] {
    require(op, "operator");
    if (!(epsilon >= 0.0)) uwave::fail(Errc::Parameter, "epsilon must be non-negative");
    json rows = json::array();
    for (const auto& c : uwave::characteristics(op->op, epsilon)) {
      json v = json::array();
      for (const auto& comp : c.vertex.components) v.push_back(comp.ball.value);
      rows.push_back({{"vertex", std::move(v)},
                      {"re", c.lambda.real()},
                      {"im", c.lambda.imag()},
                      {"abs", std::abs(c.lambda)},
                      {"scale", c.scale}});
    }
    emit(rows, json_out);
  });
}

uwave_status uwave_problem_load(const char* source, const uwave_space* default_space,
                                uwave_problem** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "output pointer");
    *out = new uwave_problem{
        uwave::io::load_problem(uwave::io::source_from_arg(source), tree_or_null(default_space))};
  });
}

uwave_status uwave_problem_from_json(const char* text, const char* base_dir,
                                     const uwave_space* default_space, uwave_problem** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new uwave_problem{
        uwave::io::load_problem(text_source(text, base_dir), tree_or_null(default_space))};
  });
}

void uwave_problem_free(uwave_problem* problem) { delete problem; }

uwave_status uwave_problem_set_epsilon(uwave_problem* problem, double epsilon) {
  return guarded([&] {
    require(problem, "problem");
    if (!(epsilon >= 0.0) || epsilon > 1e300) {
      uwave::fail(Errc::Parameter, "epsilon must be finite and non-negative");
    }
    problem->problem.epsilon = epsilon;
  });
}

uwave_status uwave_problem_set_seed(uwave_problem* problem, uint64_t seed) {
  return guarded([&] {
    require(problem, "problem");
    problem->problem.free_params.mode = uwave::FreeParamPolicy::Mode::Seeded;
    problem->problem.free_params.seed = seed;
    problem->problem.free_params.values.clear();
  });
}

uwave_status uwave_problem_check(const uwave_problem* problem, char** json_out) {
  return guarded([&] {
    require(problem, "problem");
    emit(uwave::io::to_json(uwave::check_solvability(problem->problem)), json_out);
  });
}

uwave_status uwave_solve(const uwave_problem* problem, uwave_solution** out) {
  return guarded([&] {
    require(problem, "problem");
    require(out, "output pointer");
    uwave::Solution s = uwave::solve(problem->problem);
    json doc = uwave::io::to_json(s);
    *out = new uwave_solution{std::move(s.u), std::move(doc)};
  });
}

namespace {

uwave_solution* solution_from(const uwave::io::Source& src) {
  uwave::GeneralizedFunction u = uwave::io::load_generalized_function(src);
  json doc = uwave::io::to_json(u);
  // Free parameters and residual are carried through unchanged.
  json in = src.value;
  if (in.is_string()) {
    std::filesystem::path p = in.get<std::string>();
    if (p.is_relative()) p = src.base / p;
    in = uwave::io::read_file(p);
  }
  for (const char* key : {"free_params", "residual"}) {
    if (in.is_object() && in.contains(key)) doc[key] = in[key];
  }
  return new uwave_solution{std::move(u), std::move(doc)};
}

}  // namespace

uwave_status uwave_solution_load(const char* source, uwave_solution** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "output pointer");
    *out = solution_from(uwave::io::source_from_arg(source));
  });
}

uwave_status uwave_solution_from_json(const char* text, const char* base_dir,
                                      uwave_solution** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = solution_from(text_source(text, base_dir));
  });
}

void uwave_solution_free(uwave_solution* solution) { delete solution; }

uwave_status uwave_solution_to_json(const uwave_solution* solution, char** json_out) {
  return guarded([&] {
    require(solution, "solution");
    emit(solution->doc, json_out);
  });
}

uwave_status uwave_solution_arity(const uwave_solution* solution, size_t* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "output pointer");
    *out = solution->u.arity();
  });
}

uwave_status uwave_solution_eval(const uwave_solution* solution, const uint32_t* vertex,
                                 size_t arity, double* re, double* im) {
  return guarded([&] {
    require(solution, "solution");
    const auto v = ids(vertex, arity);
    const Complex z = eval_at(solution->u, v);
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

uwave_status uwave_solution_eval_all(const uwave_solution* solution, char** json_out) {
  return guarded([&] {
    require(solution, "solution");
    const auto& u = solution->u;
    std::vector<uwave::AugmentedFactor> factors;
    for (const auto& f : u.factors()) factors.push_back(uwave::AugmentedFactor::plain(f));
    const uwave::ProductHypergraph g(std::move(factors));
    json rows = json::array();
    g.for_each_vertex([&](const uwave::HyperVertex& hv) {
      std::vector<BallId> v;
      json ids_json = json::array();
      for (const auto& c : hv.components) {
        v.push_back(c.ball);
        ids_json.push_back(c.ball.value);
      }
      const Complex z = eval_at(u, v);
      rows.push_back({{"vertex", std::move(ids_json)}, {"re", z.real()}, {"im", z.imag()}});
    });
    emit(rows, json_out);
  });
}

}  // extern "C"
