#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bfflab {

/// Minimal s-expression tree shared by the term, polynomial and scheme
/// file formats. `;` starts a comment that runs to the end of the line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view a) const { return !is_list && atom == a; }
  bool is_keyword() const { return !is_list && !atom.empty() && atom.front() == ':'; }
  /// Head atom of a non-empty list, or "" otherwise.
  std::string_view head() const;

  std::string to_string() const;
};

/// Parses exactly one expression (trailing whitespace and comments allowed).
SExpr parse_sexpr(std::string_view text);

std::vector<SExpr> parse_sexprs(std::string_view text);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);

/// For keyword-argument lists like `(lrn :g <t> :h1 <t>)`: returns the value
/// following `key`, or nullptr when absent. Items before the first keyword
/// are skipped.
const SExpr* keyword_arg(const SExpr& list, std::string_view key);

/// Throws ParseError if the list carries a keyword not in `allowed`.
void check_keywords(const SExpr& list, const std::vector<std::string_view>& allowed);

}  // namespace bfflab
