#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/expr.hpp"

namespace stieltjes {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

UnknownIdentifierError::UnknownIdentifierError(const std::string& name, std::size_t position)
    : ParseError("unknown identifier '" + name + "'", position), name_(name) {}

NotDifferentiableError::NotDifferentiableError(const std::string& variant)
    : std::invalid_argument("expression is not differentiable: contains " + variant),
      variant_(variant) {}

ConvergenceError::ConvergenceError(const std::string& message, double best_value)
    : std::runtime_error(message), best_value_(best_value) {}

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr FunctionName kFunctions[] = {
    {"exp", Op::Exp},   {"ln", Op::Ln},   {"sin", Op::Sin}, {"cos", Op::Cos},
    {"sqrt", Op::Sqrt}, {"abs", Op::Abs}, {"erf", Op::Erf},
};

// Recursive descent over the grammar documented in expr.hpp. The tree is
// built exactly as written; no folding happens here.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    while (true) {
      skip_space();
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      skip_space();
      if (accept('*')) {
        lhs = Expr::binary(Op::Multiply, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Divide, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    skip_space();
    if (accept('-')) return Expr::unary(Op::Negate, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_space();
    if (accept('^')) return Expr::binary(Op::Power, base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr inner = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", start);
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
      fail("numeric literal out of range", start);
    }
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable();
    for (const auto& fn : kFunctions) {
      if (fn.name != name) continue;
      skip_space();
      if (!accept('(')) fail("expected '(' after function name '" + std::string(name) + "'");
      Expr arg = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return Expr::unary(fn.op, arg);
    }
    throw UnknownIdentifierError(std::string(name), start);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t at) {
    throw ParseError(message, at);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view source) { return Parser(source).parse(); }

}  // namespace stieltjes
