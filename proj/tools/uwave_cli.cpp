// Command-line front end over the uwave C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uwave/uwave.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInput = 2, kUnsolvable = 3, kNumeric = 4 };

struct Failure {
  uwave_status status;
  std::string message;
};

int exit_code(uwave_status s) {
  switch (s) {
    case UWAVE_OK: return kOk;
    case UWAVE_E_UNSOLVABLE: return kUnsolvable;
    case UWAVE_E_ILL_CONDITIONED:
    case UWAVE_E_DIVERGENT: return kNumeric;
    case UWAVE_E_INTERNAL: return kInternal;
    default: return kInput;
  }
}

void check(uwave_status s) {
  if (s != UWAVE_OK) throw Failure{s, uwave_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  uwave_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Space = std::unique_ptr<uwave_space, Deleter<uwave_space, uwave_space_free>>;
using SymbolH = std::unique_ptr<uwave_symbol, Deleter<uwave_symbol, uwave_symbol_free>>;
using Operator = std::unique_ptr<uwave_operator, Deleter<uwave_operator, uwave_operator_free>>;
using Problem = std::unique_ptr<uwave_problem, Deleter<uwave_problem, uwave_problem_free>>;
using SolutionH =
    std::unique_ptr<uwave_solution, Deleter<uwave_solution, uwave_solution_free>>;

Space load_space(const std::string& source) {
  uwave_space* s = nullptr;
  check(uwave_space_load(source.c_str(), &s));
  return Space(s);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Options {
  std::string space;
  std::string symbol;
  std::string op;
  std::string problem;
  std::string solution;
  std::string out;
  std::string format = "csv";
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> members;
  std::vector<std::string> vertices;
};

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Failure{UWAVE_E_IO, "cannot write " + o.out};
  f << text;
}

std::vector<std::uint32_t> parse_ids(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v > 0xffffffffUL) {
      throw Failure{UWAVE_E_PARSE, "bad ball id \"" + part + "\" in \"" + text + "\""};
    }
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::string vertex_cells(const json& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i].get<std::uint32_t>());
  return s;
}

std::string vertex_header(std::size_t arity) {
  std::string s;
  for (std::size_t i = 1; i <= arity; ++i) s += (i > 1 ? ",v" : "v") + std::to_string(i);
  return s;
}

int cmd_validate(const Options& o) {
  if (o.space.empty()) throw Failure{UWAVE_E_PARAMETER, "validate needs a space"};
  const Space space = load_space(o.space);
  std::vector<std::uint32_t> members;
  for (const auto& m : o.members) {
    for (auto id : parse_ids(m)) members.push_back(id);
  }
  char* out = nullptr;
  check(uwave_space_report(space.get(), o.members.empty() ? nullptr : members.data(),
                           members.size(), &out));
  const json r = json::parse(take(out));
  const bool ok = !r.contains("subtree") || r["subtree"]["ok"].get<bool>();
  if (o.format == "json") {
    write_output(o, r.dump(2) + "\n");
  } else {
    std::string t = "key,value\n";
    t += "vertices," + std::to_string(r["vertices"].get<std::size_t>()) + "\n";
    t += "leaves," + std::to_string(r["leaves"].get<std::size_t>()) + "\n";
    t += "height," + std::to_string(r["height"].get<int>()) + "\n";
    t += "total_measure," + num(r["total_measure"].get<double>()) + "\n";
    t += "zero_measure_balls," + std::to_string(r["zero_measure_balls"].size()) + "\n";
    if (r.contains("subtree")) t += std::string("regular_subtree,") + (ok ? "yes" : "no") + "\n";
    write_output(o, t);
  }
  if (!ok) {
    for (const auto& v : r["subtree"]["violations"]) {
      std::cerr << "uwave: condition " << v["condition"].get<int>() << ": "
                << v["message"].get<std::string>() << "\n";
    }
    return kInput;
  }
  return kOk;
}

int cmd_wavelets(const Options& o) {
  if (o.space.empty()) throw Failure{UWAVE_E_PARAMETER, "wavelets needs --space"};
  const Space space = load_space(o.space);
  char* out = nullptr;
  check(uwave_space_wavelets(space.get(), &out));
  const json rows = json::parse(take(out));
  if (o.format == "json") {
    write_output(o, rows.dump(2) + "\n");
    return kOk;
  }
  std::string t = "ball,j,subball,re,im\n";
  for (const auto& r : rows) {
    const auto& values = r["values"];
    for (std::size_t k = 0; k < values.size(); ++k) {
      t += std::to_string(r["ball"].get<std::uint32_t>()) + "," +
           std::to_string(r["j"].get<int>()) + "," + std::to_string(k) + "," +
           num(values[k][0].get<double>()) + "," + num(values[k][1].get<double>()) + "\n";
    }
  }
  write_output(o, t);
  return kOk;
}

int cmd_spectrum(const Options& o) {
  if (o.space.empty() || o.symbol.empty()) {
    throw Failure{UWAVE_E_PARAMETER, "spectrum needs --space and --symbol"};
  }
  const Space space = load_space(o.space);
  uwave_symbol* sym = nullptr;
  check(uwave_symbol_load(o.symbol.c_str(), &sym));
  const SymbolH symbol(sym);
  char* out = nullptr;
  check(uwave_spectrum(space.get(), symbol.get(), &out));
  const json rows = json::parse(take(out));
  if (o.format == "json") {
    write_output(o, rows.dump(2) + "\n");
    return kOk;
  }
  std::string t = "ball,re,im\n";
  for (const auto& r : rows) {
    t += std::to_string(r["ball"].get<std::uint32_t>()) + "," + num(r["re"].get<double>()) +
         "," + num(r["im"].get<double>()) + "\n";
  }
  write_output(o, t);
  return kOk;
}

int cmd_characteristics(const Options& o) {
  if (o.op.empty()) throw Failure{UWAVE_E_PARAMETER, "characteristics needs --operator"};
  Space space;
  if (!o.space.empty()) space = load_space(o.space);
  uwave_operator* raw = nullptr;
  check(uwave_operator_load(o.op.c_str(), space.get(), &raw));
  const Operator op(raw);
  std::size_t arity = 0;
  check(uwave_operator_arity(op.get(), &arity));
  char* out = nullptr;
  check(uwave_operator_characteristics(op.get(), o.epsilon.value_or(1e-9), &out));
  const json rows = json::parse(take(out));
  if (o.format == "json") {
    write_output(o, rows.dump(2) + "\n");
    return kOk;
  }
  std::string t = vertex_header(arity) + ",abs,re,im\n";
  for (const auto& r : rows) {
    t += vertex_cells(r["vertex"]) + "," + num(r["abs"].get<double>()) + "," +
         num(r["re"].get<double>()) + "," + num(r["im"].get<double>()) + "\n";
  }
  write_output(o, t);
  return kOk;
}

void report_violations(uwave_problem* problem) {
  char* out = nullptr;
  if (uwave_problem_check(problem, &out) != UWAVE_OK) return;
  const json r = json::parse(take(out));
  for (const auto& v : r["violations"]) {
    std::cerr << "violation: vertex=" << v["vertex"].dump() << " j=" << v["j"].dump()
              << " rhs=" << v["rhs"].dump() << " lambda=" << v["lambda"].dump()
              << (v["exact"].get<bool>() ? "" : " (below tolerance)") << "\n";
  }
}

int cmd_solve(const Options& o) {
  if (o.problem.empty()) throw Failure{UWAVE_E_PARAMETER, "solve needs a problem file"};
  Space space;
  if (!o.space.empty()) space = load_space(o.space);
  uwave_problem* raw = nullptr;
  check(uwave_problem_load(o.problem.c_str(), space.get(), &raw));
  const Problem problem(raw);
  if (o.epsilon) check(uwave_problem_set_epsilon(problem.get(), *o.epsilon));
  if (o.seed) check(uwave_problem_set_seed(problem.get(), *o.seed));

  uwave_solution* sol = nullptr;
  const uwave_status st = uwave_solve(problem.get(), &sol);
  if (st == UWAVE_E_UNSOLVABLE || st == UWAVE_E_ILL_CONDITIONED) {
    const std::string msg = uwave_last_error();
    std::cerr << "uwave: " << uwave_status_name(st) << ": " << msg << "\n";
    report_violations(problem.get());
    return exit_code(st);
  }
  check(st);
  const SolutionH solution(sol);
  char* out = nullptr;
  check(uwave_solution_to_json(solution.get(), &out));
  const json doc = json::parse(take(out));
  write_output(o, doc.dump(2) + "\n");

  std::ostream& summary = o.out.empty() ? std::cerr : std::cout;
  const auto& res = doc["residual"];
  summary << "coefficients: " << doc["coeffs"].size() << "\n"
          << "free_params: " << doc["free_params"].size() << "\n";
  for (const auto& f : doc["free_params"]) {
    summary << "  vertex=" << f["vertex"].dump() << " j=" << f["j"].dump() << " value=["
            << num(f["re"].get<double>()) << "," << num(f["im"].get<double>()) << "]\n";
  }
  summary << "max_rel: " << num(res["max_rel"].get<double>()) << "\n";
  for (const auto& w : res["warnings"]) summary << "warning: " << w.get<std::string>() << "\n";
  return kOk;
}

int cmd_eval(const Options& o) {
  if (o.solution.empty()) throw Failure{UWAVE_E_PARAMETER, "eval needs a solution file"};
  uwave_solution* raw = nullptr;
  check(uwave_solution_load(o.solution.c_str(), &raw));
  const SolutionH solution(raw);
  std::size_t arity = 0;
  check(uwave_solution_arity(solution.get(), &arity));

  json rows = json::array();
  if (o.vertices.empty()) {
    char* out = nullptr;
    check(uwave_solution_eval_all(solution.get(), &out));
    rows = json::parse(take(out));
  } else {
    for (const auto& text : o.vertices) {
      const auto v = parse_ids(text);
      double re = 0.0;
      double im = 0.0;
      check(uwave_solution_eval(solution.get(), v.data(), v.size(), &re, &im));
      rows.push_back({{"vertex", v}, {"re", re}, {"im", im}});
    }
  }
  if (o.format == "json") {
    write_output(o, rows.dump(2) + "\n");
    return kOk;
  }
  std::string t = vertex_header(arity) + ",re,im\n";
  for (const auto& r : rows) {
    t += vertex_cells(r["vertex"]) + "," + num(r["re"].get<double>()) + "," +
         num(r["im"].get<double>()) + "\n";
  }
  write_output(o, t);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelets, ultrametric pseudodifferential operators and Cauchy problems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output file (default: stdout)");
    c->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* validate = app.add_subcommand("validate", "Check a space and optionally a regular subtree");
  validate->add_option("space,--space", o.space, "Space file or padic(p,depth)");
  validate->add_option("--members", o.members, "Comma-separated ball ids of a candidate subtree");
  common(validate);

  auto* wavelets = app.add_subcommand("wavelets", "List the wavelet basis of a space");
  wavelets->add_option("space,--space", o.space, "Space file or padic(p,depth)");
  common(wavelets);

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of an operator on every non-leaf ball");
  spectrum->add_option("--space", o.space, "Space file or padic(p,depth)")->required();
  spectrum->add_option("--symbol", o.symbol, "Symbol file or homog(beta=...)")->required();
  common(spectrum);

  auto* chars = app.add_subcommand("characteristics", "Generic vertices with vanishing eigenvalue");
  chars->add_option("operator,--operator", o.op, "Operator file");
  chars->add_option("--space", o.space, "Space for factors that name none");
  chars->add_option("--epsilon", o.epsilon, "Relative characteristic tolerance");
  common(chars);

  auto* solve = app.add_subcommand("solve", "Solve a Cauchy problem");
  solve->add_option("problem,--problem", o.problem, "Problem file");
  solve->add_option("--space", o.space, "Space for factors that name none");
  solve->add_option("--epsilon", o.epsilon, "Relative characteristic tolerance");
  solve->add_option("--seed", o.seed, "Draw free parameters from this seed");
  common(solve);

  auto* eval = app.add_subcommand("eval", "Evaluate a solution on characteristic functions of balls");
  eval->add_option("solution", o.solution, "Solution file")->required();
  eval->add_option("--vertex", o.vertices, "Comma-separated ball ids, one per factor (repeatable)");
  common(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*wavelets) return cmd_wavelets(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*chars) return cmd_characteristics(o);
    if (*solve) return cmd_solve(o);
    if (*eval) return cmd_eval(o);
  } catch (const Failure& f) {
    std::cerr << "uwave: " << uwave_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "uwave: internal: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
