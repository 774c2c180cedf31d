#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference to an unknown action/predicate/type, or arity/type disagreement.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// An operation was called on inputs that violate its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Lexical or grammatical failure in an input file. Carries a 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NumericError : public Error {
 public:
  NumericError(const std::string& message, std::size_t step)
      : Error(message + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pdl
