#pragma once

#include <stdexcept>
#include <string>

namespace silp {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& var)
      : Error("unbound variable '" + var + "'"), variable(var) {}
  std::string variable;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
  explicit DivisionByZero(const std::string& what) : Error("division by zero: " + what) {}
};

class DegenerateDenominator : public Error {
 public:
  explicit DegenerateDenominator(const std::string& what)
      : Error("degenerate denominator: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line_no, int column_no)
      : Error(std::to_string(line_no) + ":" + std::to_string(column_no) + ": " + msg),
        line(line_no),
        column(column_no) {}
  int line;
  int column;
};

/// Semantic problems found after a successful parse (unknown variable, empty instance, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string code_, const std::string& msg)
      : Error(code_ + ": " + msg), code(std::move(code_)) {}
  std::string code;
};

class SignUncertified : public Error {
 public:
  SignUncertified(const std::string& var, const std::string& block)
      : Error("cannot certify the sign of " + var + " on block " + block),
        variable(var),
        block_label(block) {}
  std::string variable;
  std::string block_label;
};

class DimensionCapExceeded : public Error {
 public:
  DimensionCapExceeded(std::size_t axes, std::size_t cap)
      : Error("product domain needs " + std::to_string(axes) + " index axes, cap is " +
              std::to_string(cap)) {}
};

class NoFiniteOV : public Error {
 public:
  NoFiniteOV() : Error("optimal value is not finite") {}
};

class MonotonicityViolation : public Error {
 public:
  explicit MonotonicityViolation(const std::string& what)
      : Error("truncated optimal values decreased: " + what) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t got, std::size_t want)
      : Error("expected " + std::to_string(want) + " entries, got " + std::to_string(got)) {}
};

class NotInU : public Error {
 public:
  NotInU() : Error("direction is not in span(a^1, ..., a^n, b)") {}
};

}  // namespace silp
