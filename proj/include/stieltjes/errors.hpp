#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stieltjes {

// Raised when an expression cannot be evaluated at a point: ln or sqrt of a
// negative, division by zero, or a non-finite intermediate.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t position);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NotDifferentiableError : public std::invalid_argument {
 public:
  explicit NotDifferentiableError(const std::string& variant);
  const std::string& variant() const { return variant_; }

 private:
  std::string variant_;
};

// Violated operation precondition (node outside admissible range, p <= 1 for
// the derivative-norm bounds, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative estimate did not reach the requested tolerance within its depth
// limit. Carries the best value found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, double best_value);
  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

// Malformed experiment configuration. line is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stieltjes
