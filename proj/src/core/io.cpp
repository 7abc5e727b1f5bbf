#include "core/io.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace uwave::io {

namespace {

namespace fs = std::filesystem;

// A value inside a loaded document, with enough context for error messages.
class Node {
 public:
  Node(const json& value, std::shared_ptr<const std::string> origin, json::json_pointer ptr,
       fs::path base)
      : value_(&value), origin_(std::move(origin)), ptr_(std::move(ptr)), base_(std::move(base)) {}

  const json& value() const { return *value_; }
  const fs::path& base() const { return base_; }

  [[noreturn]] void error(const std::string& msg) const {
    std::string where = *origin_;
    const std::string p = ptr_.to_string();
    if (!p.empty()) where += ":" + p;
    fail(Errc::Parse, where + ": " + msg);
  }

  bool has(const std::string& key) const {
    return value_->is_object() && value_->contains(key);
  }

  Node at(const std::string& key) const {
    if (!value_->is_object()) error("expected an object");
    const auto it = value_->find(key);
    if (it == value_->end()) error("missing key \"" + key + "\"");
    return Node(*it, origin_, ptr_ / key, base_);
  }

  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::vector<Node> items() const {
    if (!value_->is_array()) error("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) {
      out.emplace_back((*value_)[i], origin_, ptr_ / i, base_);
    }
    return out;
  }

  double number() const {
    if (!value_->is_number()) error("expected a number");
    return value_->get<double>();
  }

  std::int64_t integer() const {
    if (value_->is_number_integer()) return value_->get<std::int64_t>();
    if (value_->is_number_float()) {
      const double d = value_->get<double>();
      if (d == static_cast<double>(static_cast<std::int64_t>(d))) {
        return static_cast<std::int64_t>(d);
      }
    }
    error("expected an integer");
  }

  std::uint32_t id() const {
    const std::int64_t v = integer();
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) error("ball id out of range");
    return static_cast<std::uint32_t>(v);
  }

  int small_int() const {
    const std::int64_t v = integer();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      error("integer out of range");
    }
    return static_cast<int>(v);
  }

  bool boolean() const {
    if (!value_->is_boolean()) error("expected true or false");
    return value_->get<bool>();
  }

  std::string string() const {
    if (!value_->is_string()) error("expected a string");
    return value_->get<std::string>();
  }

  // [re, im] or a bare number.
  Complex complex() const {
    if (value_->is_number()) return {number(), 0.0};
    const auto parts = items();
    if (parts.size() != 2) error("expected [re, im]");
    return {parts[0].number(), parts[1].number()};
  }

  // "re"/"im" members of an entry object; both default to 0.
  Complex re_im() const {
    const auto re = find("re");
    const auto im = find("im");
    return {re ? re->number() : 0.0, im ? im->number() : 0.0};
  }

 private:
  const json* value_;
  std::shared_ptr<const std::string> origin_;
  json::json_pointer ptr_;
  fs::path base_;
};

// A loaded document owns its JSON; nodes point into it.
struct Document {
  std::shared_ptr<const json> root;
  std::shared_ptr<const std::string> origin;
  fs::path base;

  Node node() const { return Node(*root, origin, json::json_pointer{}, base); }
};

Document document_from_file(const fs::path& path) {
  Document d;
  d.root = std::make_shared<const json>(read_file(path));
  d.origin = std::make_shared<const std::string>(path.string());
  d.base = path.parent_path();
  return d;
}

bool is_shorthand(const std::string& s) {
  static const std::regex re(R"(^\s*(padic|homog)\s*\(.*\)\s*$)");
  return std::regex_match(s, re);
}

// A string that is not shorthand names a file relative to the node's base.
// Anything else is used in place.
struct Resolved {
  std::optional<Document> doc;  // set when a file was read
  std::optional<Node> node;
  const Node& get() const { return *node; }
};

Resolved resolve(const Node& n) {
  Resolved r;
  if (n.value().is_string() && !is_shorthand(n.value().get<std::string>())) {
    fs::path p = n.value().get<std::string>();
    if (p.is_relative()) p = n.base() / p;
    r.doc = document_from_file(p);
    r.node = r.doc->node();
  } else {
    r.node = n;
  }
  return r;
}

Document document_from_source(const Source& src) {
  Document d;
  d.root = std::make_shared<const json>(src.value);
  d.origin = std::make_shared<const std::string>("<inline>");
  d.base = src.base;
  return d;
}

std::shared_ptr<const BallTree> padic_shorthand(const Node& n) {
  static const std::regex re(R"(^\s*padic\s*\(\s*(\d{1,6})\s*,\s*(\d{1,6})\s*\)\s*$)");
  const std::string s = n.string();
  std::smatch m;
  if (!std::regex_match(s, m, re)) n.error("expected padic(p,depth), got \"" + s + "\"");
  const int p = std::stoi(m[1]);
  const int depth = std::stoi(m[2]);
  return std::make_shared<const BallTree>(build_padic_tree(p, depth));
}

Symbol homog_shorthand(const Node& n) {
  static const std::regex outer(R"(^\s*homog\s*\((.*)\)\s*$)");
  static const std::regex kv(R"(^\s*(beta|c|ci|tail)\s*=\s*([^\s]+)\s*$)");
  const std::string s = n.string();
  std::smatch m;
  if (!std::regex_match(s, m, outer)) n.error("expected homog(beta=...), got \"" + s + "\"");
  std::optional<double> beta;
  double c_re = 1.0;
  double c_im = 0.0;
  bool tail = false;
  std::stringstream args(m[1].str());
  std::string part;
  while (std::getline(args, part, ',')) {
    std::smatch a;
    if (!std::regex_match(part, a, kv)) n.error("bad homog argument \"" + part + "\"");
    const std::string key = a[1];
    const std::string val = a[2];
    if (key == "tail") {
      if (val == "1" || val == "true") {
        tail = true;
      } else if (val == "0" || val == "false") {
        tail = false;
      } else {
        n.error("tail must be 0 or 1");
      }
      continue;
    }
    double x = 0.0;
    std::istringstream in(val);
    in.imbue(std::locale::classic());
    if (!(in >> x) || !in.eof()) n.error("bad number \"" + val + "\" for " + key);
    if (key == "beta") beta = x;
    if (key == "c") c_re = x;
    if (key == "ci") c_im = x;
  }
  if (!beta) n.error("homog(...) needs beta");
  return Symbol::homogeneous({c_re, c_im}, *beta).with_tail(tail ? Tail::HomogeneousExtension
                                                                 : Tail::None);
}

std::shared_ptr<const BallTree> space_at(const Node& ref) {
  if (ref.value().is_string() && is_shorthand(ref.value().get<std::string>())) {
    return padic_shorthand(ref);
  }
  const Resolved r = resolve(ref);
  const Node& n = r.get();
  const std::string kind = n.at("kind").string();
  if (kind == "padic") {
    const std::int64_t p = n.at("p").integer();
    const std::int64_t depth = n.at("depth").integer();
    if (p < 2 || p > 1'000'000) n.at("p").error("p must be at least 2");
    if (depth < 0 || depth > 64) n.at("depth").error("depth must be in 0..64");
    return std::make_shared<const BallTree>(
        build_padic_tree(static_cast<int>(p), static_cast<int>(depth)));
  }
  if (kind == "explicit") {
    std::vector<VertexSpec> specs;
    for (const Node& v : n.at("vertices").items()) {
      VertexSpec s;
      s.id = v.at("id").id();
      const Node parent = v.at("parent");
      if (!parent.value().is_null()) s.parent = parent.id();
      s.measure = v.at("measure").number();
      s.diameter = v.at("diameter").number();
      specs.push_back(s);
    }
    return std::make_shared<const BallTree>(BallTree::from_vertices(specs));
  }
  n.at("kind").error("unknown space kind \"" + kind + "\"");
}

Symbol symbol_at(const Node& ref) {
  if (ref.value().is_string() && is_shorthand(ref.value().get<std::string>())) {
    return homog_shorthand(ref);
  }
  const Resolved r = resolve(ref);
  const Node& n = r.get();
  const std::string kind = n.at("kind").string();
  if (kind == "table") {
    std::map<BallId, Complex> entries;
    for (const Node& e : n.at("entries").items()) {
      const BallId b{e.at("ball").id()};
      if (!entries.emplace(b, e.re_im()).second) e.error("duplicate entry for a ball");
    }
    return Symbol::table(std::move(entries));
  }
  if (kind == "homogeneous") {
    const auto c = n.find("c");
    const auto tail = n.find("tail");
    return Symbol::homogeneous(c ? c->complex() : Complex{1.0, 0.0}, n.at("beta").number())
        .with_tail(tail && tail->boolean() ? Tail::HomogeneousExtension : Tail::None);
  }
  n.at("kind").error("unknown symbol kind \"" + kind + "\"");
}

// Shares one wavelet system per distinct space reference.
class SystemCache {
 public:
  std::shared_ptr<const WaveletSystem> get(const Node& ref) {
    std::string key = ref.value().dump();
    if (ref.value().is_string() && !is_shorthand(ref.value().get<std::string>())) {
      key = (ref.base() / ref.value().get<std::string>()).lexically_normal().string();
    }
    auto& slot = cache_[key];
    if (!slot) slot = std::make_shared<const WaveletSystem>(space_at(ref));
    return slot;
  }
  std::shared_ptr<const WaveletSystem> get(std::shared_ptr<const BallTree> tree) {
    auto& slot = by_tree_[tree.get()];
    if (!slot) slot = std::make_shared<const WaveletSystem>(std::move(tree));
    return slot;
  }

 private:
  std::map<std::string, std::shared_ptr<const WaveletSystem>> cache_;
  std::map<const BallTree*, std::shared_ptr<const WaveletSystem>> by_tree_;
};

MultiOperator operator_at(const Node& ref, std::shared_ptr<const BallTree> default_space) {
  const Resolved r = resolve(ref);
  const Node& n = r.get();
  SystemCache cache;
  std::shared_ptr<const WaveletSystem> shared;
  if (const auto s = n.find("space")) {
    shared = cache.get(*s);
  } else if (default_space) {
    shared = cache.get(default_space);
  }

  std::vector<MultiOperator::Factor> factors;
  for (const Node& f : n.at("factors").items()) {
    std::shared_ptr<const WaveletSystem> system;
    std::optional<Symbol> symbol;
    if (f.value().is_object() && f.has("symbol")) {
      system = f.has("space") ? cache.get(f.at("space")) : shared;
      symbol = symbol_at(f.at("symbol"));
    } else {
      system = shared;
      symbol = symbol_at(f);
    }
    if (!system) f.error("factor has no space; give \"space\" here, in the operator, or --space");
    factors.push_back({system, *symbol, symbol->preferred_tail()});
  }
  if (factors.empty()) n.at("factors").error("an operator needs at least one factor");

  std::vector<OperatorTerm> terms;
  if (const auto ts = n.find("terms")) {
    for (const Node& t : ts->items()) {
      OperatorTerm term;
      for (const Node& i : t.at("indices").items()) {
        const std::int64_t k = i.integer();
        if (k < 1 || k > static_cast<std::int64_t>(factors.size())) {
          i.error("factor index " + std::to_string(k) + " is outside 1.." +
                  std::to_string(factors.size()));
        }
        term.factors.push_back(static_cast<std::size_t>(k - 1));
      }
      term.coeff = t.has("re") || t.has("im") ? t.re_im() : Complex{1.0, 0.0};
      terms.push_back(std::move(term));
    }
  } else if (factors.size() == 1) {
    terms.push_back({{0}, {1.0, 0.0}});
  } else {
    n.error("missing key \"terms\"");
  }
  return MultiOperator(std::move(factors), std::move(terms));
}

MultiIndex index_at(const Node& e, std::size_t arity) {
  MultiIndex idx;
  if (e.has("ball")) {
    idx.vertex.push_back(BallId{e.at("ball").id()});
    idx.j.push_back(e.at("j").small_int());
  } else {
    for (const Node& v : e.at("vertex").items()) idx.vertex.push_back(BallId{v.id()});
    const Node j = e.at("j");
    if (j.value().is_array()) {
      for (const Node& x : j.items()) idx.j.push_back(x.small_int());
    } else {
      idx.j.push_back(j.small_int());
    }
  }
  if (idx.vertex.size() != arity || idx.j.size() != arity) {
    e.error("index has arity " + std::to_string(idx.vertex.size()) + ", expected " +
            std::to_string(arity));
  }
  return idx;
}

std::map<MultiIndex, Complex> entries_at(const Node& list, std::size_t arity) {
  std::map<MultiIndex, Complex> out;
  for (const Node& e : list.items()) {
    if (!out.emplace(index_at(e, arity), e.re_im()).second) e.error("duplicate index");
  }
  return out;
}

std::vector<BallId> anchor_vertex(const Node& a, std::size_t arity) {
  std::vector<BallId> v;
  if (a.has("ball")) {
    v.push_back(BallId{a.at("ball").id()});
  } else {
    for (const Node& x : a.at("vertex").items()) v.push_back(BallId{x.id()});
  }
  if (v.size() != arity) {
    a.error("anchor has arity " + std::to_string(v.size()) + ", expected " +
            std::to_string(arity));
  }
  return v;
}

json entry_json(const MultiIndex& idx, Complex z) {
  json e = index_to_json(idx);
  e["re"] = z.real();
  e["im"] = z.imag();
  return e;
}

}  // namespace

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path.string());
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(Errc::Parse, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": invalid JSON");
  }
}

Source source_from_arg(const std::string& arg) { return Source{json(arg), fs::current_path()}; }

std::shared_ptr<const BallTree> load_space(const Source& src) {
  const Document d = document_from_source(src);
  return space_at(d.node());
}

json space_to_json(const BallTree& tree) {
  if (const auto p = tree.padic_base()) {
    return {{"kind", "padic"}, {"p", *p}, {"depth", tree.height()}};
  }
  json vertices = json::array();
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const BallId b{i};
    const auto parent = tree.parent(b);
    vertices.push_back({{"id", i},
                        {"parent", parent ? json(parent->value) : json(nullptr)},
                        {"measure", tree.measure(b)},
                        {"diameter", tree.diameter(b)}});
  }
  return {{"kind", "explicit"}, {"vertices", std::move(vertices)}};
}

Symbol load_symbol(const Source& src) {
  const Document d = document_from_source(src);
  return symbol_at(d.node());
}

json symbol_to_json(const Symbol& symbol) {
  if (symbol.is_homogeneous()) {
    const auto& h = symbol.as_homogeneous();
    return {{"kind", "homogeneous"},
            {"c", complex_to_json(h.c)},
            {"beta", h.beta},
            {"tail", symbol.preferred_tail() == Tail::HomogeneousExtension}};
  }
  json entries = json::array();
  for (const auto& [b, z] : symbol.as_table().entries) {
    entries.push_back({{"ball", b.value}, {"re", z.real()}, {"im", z.imag()}});
  }
  return {{"kind", "table"}, {"entries", std::move(entries)}};
}

MultiOperator load_operator(const Source& src, std::shared_ptr<const BallTree> default_space) {
  const Document d = document_from_source(src);
  return operator_at(d.node(), std::move(default_space));
}

WaveletExpansion load_expansion(const Source& src) {
  const Document d = document_from_source(src);
  const Resolved r = resolve(d.node());
  const Node& n = r.get();
  WaveletExpansion e;
  if (const auto m = n.find("mean")) e.mean = m->complex();
  if (const auto cs = n.find("coeffs")) {
    for (const Node& c : cs->items()) {
      const WaveletIndex idx{BallId{c.at("ball").id()}, c.at("j").small_int()};
      if (!e.coeffs.emplace(idx, c.re_im()).second) c.error("duplicate index");
    }
  }
  return e;
}

json expansion_to_json(const WaveletExpansion& e) {
  json coeffs = json::array();
  for (const auto& [idx, z] : e.coeffs) {
    coeffs.push_back({{"ball", idx.ball.value}, {"j", idx.j}, {"re", z.real()}, {"im", z.imag()}});
  }
  return {{"mean", complex_to_json(e.mean)}, {"coeffs", std::move(coeffs)}};
}

GeneralizedFunction load_generalized_function(const Source& src) {
  const Document d = document_from_source(src);
  const Resolved r = resolve(d.node());
  const Node& n = r.get();
  SystemCache cache;
  GeneralizedFunction::Factors factors;
  for (const Node& s : n.at("spaces").items()) factors.push_back(cache.get(s));
  if (factors.empty()) n.at("spaces").error("at least one space is required");
  const Node a = n.at("anchor");
  const auto anchor = anchor_vertex(a, factors.size());
  const Complex value = a.has("value") ? a.at("value").complex() : Complex{};
  auto coeffs = n.has("coeffs") ? entries_at(n.at("coeffs"), factors.size())
                                : std::map<MultiIndex, Complex>{};
  return GeneralizedFunction(std::move(factors), anchor, value, std::move(coeffs));
}

json to_json(const GeneralizedFunction& u) {
  json spaces = json::array();
  for (const auto& f : u.factors()) spaces.push_back(space_to_json(f->tree()));
  json anchor_ids = json::array();
  for (BallId b : u.anchor()) anchor_ids.push_back(b.value);
  json coeffs = json::array();
  for (const auto& [idx, z] : u.coeffs()) coeffs.push_back(entry_json(idx, z));
  return {{"spaces", std::move(spaces)},
          {"anchor", {{"vertex", std::move(anchor_ids)}, {"value", complex_to_json(u.anchor_value())}}},
          {"coeffs", std::move(coeffs)}};
}

CauchyProblem load_problem(const Source& src, std::shared_ptr<const BallTree> default_space) {
  const Document d = document_from_source(src);
  const Resolved r = resolve(d.node());
  const Node& n = r.get();

  std::shared_ptr<const BallTree> space = std::move(default_space);
  if (const auto s = n.find("space")) space = space_at(*s);
  MultiOperator op = operator_at(n.at("operator"), space);
  const std::size_t arity = op.arity();

  LizorkinSeries rhs;
  rhs.arity = arity;
  {
    const Resolved rr = resolve(n.at("rhs"));
    const Node& f = rr.get();
    if (const auto m = f.find("mean"); m && m->complex() != Complex{}) {
      fail(Errc::Domain, "rhs has a nonzero mean; the right-hand side must have zero mean");
    }
    if (const auto cs = f.find("coeffs")) rhs.coeffs = entries_at(*cs, arity);
  }

  const Node a = n.at("anchor");
  std::vector<BallId> anchor = anchor_vertex(a, arity);
  const Complex anchor_value = a.has("value") ? a.at("value").complex() : Complex{};
  std::map<MultiIndex, Complex> boundary;
  if (const auto b = n.find("boundary")) boundary = entries_at(*b, arity);

  CauchyProblem p{std::move(op), std::move(rhs), std::move(anchor), anchor_value,
                  std::move(boundary), kDefaultCharTolerance, {}};
  if (const auto e = n.find("epsilon")) {
    p.epsilon = e->number();
    if (!(p.epsilon >= 0.0)) e->error("epsilon must be non-negative");
  }
  if (const auto fp = n.find("free_params")) {
    const json& v = fp->value();
    if (v.is_string()) {
      if (fp->string() != "zero") fp->error("expected \"zero\", {\"seed\": n} or a list");
    } else if (v.is_object()) {
      const std::int64_t seed = fp->at("seed").integer();
      p.free_params.mode = FreeParamPolicy::Mode::Seeded;
      p.free_params.seed = static_cast<std::uint64_t>(seed);
    } else {
      p.free_params.mode = FreeParamPolicy::Mode::Explicit;
      p.free_params.values = entries_at(*fp, arity);
    }
  }
  return p;
}

json index_to_json(const MultiIndex& idx) {
  json v = json::array();
  json j = json::array();
  for (std::size_t i = 0; i < idx.arity(); ++i) {
    v.push_back(idx.vertex[i].value);
    j.push_back(idx.j[i]);
  }
  return {{"vertex", std::move(v)}, {"j", std::move(j)}};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Solution& s) {
  json out = to_json(s.u);
  json fp = json::array();
  for (const auto& f : s.free_params) fp.push_back(entry_json(f.index, f.value));
  out["free_params"] = std::move(fp);
  json ill = json::array();
  for (const auto& idx : s.residual.ill_conditioned) ill.push_back(index_to_json(idx));
  out["residual"] = {{"max_rel", s.residual.max_rel},
                     {"ill_conditioned", std::move(ill)},
                     {"warnings", s.residual.warnings}};
  return out;
}

json to_json(const SolvabilityReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json e = index_to_json(x.index);
    e["rhs"] = complex_to_json(x.rhs);
    e["lambda"] = complex_to_json(x.lambda);
    e["exact"] = x.exact;
    v.push_back(std::move(e));
  }
  return {{"ok", r.ok()}, {"violations", std::move(v)}};
}

}  // namespace uwave::io
