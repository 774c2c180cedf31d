#include "pdl/sexpr.hpp"

#include "pdl/error.hpp"

namespace pdl {

namespace {

constexpr std::size_t kMaxDepth = 256;

bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == ';' || c == ' ' || c == '\t' ||
         c == '\n' || c == '\r';
}

}  // namespace

void fail_at(const SExpr& node, const std::string& message) {
  throw ParseError(message, node.line, node.column);
}

std::vector<SExpr> read_sexprs(std::string_view text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;

  auto emit = [&](SExpr node) {
    if (stack.empty()) {
      top.push_back(std::move(node));
    } else {
      stack.back().items.push_back(std::move(node));
    }
  };
  auto advance = [&](char c) {
    ++i;
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(c);
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(text[i]);
    } else if (c == '(' || c == '[') {
      if (stack.size() >= kMaxDepth) throw ParseError("nesting too deep", line, column);
      SExpr node;
      node.kind = SExpr::Kind::List;
      node.open = c;
      node.line = line;
      node.column = column;
      stack.push_back(std::move(node));
      advance(c);
    } else if (c == ')' || c == ']') {
      if (stack.empty()) throw ParseError(std::string("unexpected '") + c + "'", line, column);
      const char expected = stack.back().open == '(' ? ')' : ']';
      if (c != expected) {
        throw ParseError(std::string("expected '") + expected + "' but found '" + c + "'", line,
                         column);
      }
      SExpr node = std::move(stack.back());
      stack.pop_back();
      advance(c);
      emit(std::move(node));
    } else {
      SExpr node;
      node.line = line;
      node.column = column;
      while (i < text.size() && !is_delimiter(text[i])) {
        const auto byte = static_cast<unsigned char>(text[i]);
        if (byte < 0x20 || byte == 0x7f) {
          throw ParseError("invalid character (byte " + std::to_string(byte) + ")", line, column);
        }
        node.text.push_back(text[i]);
        advance(text[i]);
      }
      emit(std::move(node));
    }
  }
  if (!stack.empty()) {
    throw ParseError(std::string("unterminated '") + stack.back().open + "'", stack.back().line,
                     stack.back().column);
  }
  return top;
}

}  // namespace pdl
