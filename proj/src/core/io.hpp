#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/cauchy.hpp"
#include "core/distributions.hpp"
#include "core/pdo.hpp"
#include "core/product_space.hpp"
#include "core/tree_space.hpp"

namespace uwave::io {

using nlohmann::json;

/// A reference to a document: a file path (relative paths resolve against
/// `base`), an inline JSON object, or a shorthand string such as
/// `padic(2,3)` or `homog(beta=0.5)`. Malformed input raises Errc::Parse
/// with the file and the JSON pointer of the offending value.
struct Source {
  json value;
  std::filesystem::path base;
};

/// Reads and parses a JSON file. Errc::Io if it cannot be read.
json read_file(const std::filesystem::path& path);
/// Parses JSON text; `origin` names the text in error messages.
json parse_text(const std::string& text, const std::string& origin);

/// Source for a command-line argument: shorthand or a path relative to the
/// working directory.
Source source_from_arg(const std::string& arg);

std::shared_ptr<const BallTree> load_space(const Source& src);
json space_to_json(const BallTree& tree);

Symbol load_symbol(const Source& src);
json symbol_to_json(const Symbol& symbol);

/// Factors may be a symbol reference, which is then taken on the operator's
/// "space" (or on `default_space`), or {"space": ref, "symbol": ref}.
MultiOperator load_operator(const Source& src,
                            std::shared_ptr<const BallTree> default_space = nullptr);

WaveletExpansion load_expansion(const Source& src);
json expansion_to_json(const WaveletExpansion& e);

/// Generalized function with its spaces inlined under "spaces".
GeneralizedFunction load_generalized_function(const Source& src);
json to_json(const GeneralizedFunction& u);

CauchyProblem load_problem(const Source& src,
                           std::shared_ptr<const BallTree> default_space = nullptr);

json to_json(const Solution& s);
json to_json(const SolvabilityReport& r);
json index_to_json(const MultiIndex& idx);

/// [re, im]; readers also accept a bare real number.
json complex_to_json(Complex z);

}  // namespace uwave::io
