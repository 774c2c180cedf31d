#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pdl {

// Node of a parsed s-expression. Lists opened with '(' or '['.
struct SExpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  char open = '(';
  std::string text;  // atom text, case preserved
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view t) const { return is_atom() && text == t; }
  // True for a list whose first item is the atom `head`.
  bool has_head(std::string_view head) const {
    return is_list() && !items.empty() && items.front().is_atom(head);
  }
};

// Reads all top-level expressions. ';' starts a line comment. Throws
// ParseError (with line/column) on any lexical or bracket error.
std::vector<SExpr> read_sexprs(std::string_view text);

[[noreturn]] void fail_at(const SExpr& node, const std::string& message);

}  // namespace pdl
