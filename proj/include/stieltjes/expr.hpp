#pragma once

// Expression language for integrands and integrators.
//
// Grammar, lowest to highest precedence:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 't' | name '(' expr ')' | '(' expr ')'
//
// Function names: exp ln sin cos sqrt abs erf. Numbers are decimal with an
// optional exponent. There is no implicit multiplication and '^' is the only
// power operator.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/interval.hpp"

namespace stieltjes {

enum class Op : std::uint8_t {
  Constant,
  Variable,
  Add,
  Subtract,
  Multiply,
  Divide,
  Power,
  Negate,
  Exp,
  Ln,
  Sin,
  Cos,
  Sqrt,
  Abs,
  Erf,
};

int arity(Op op);
std::string_view op_name(Op op);

// Immutable expression tree. Copies share structure.
class Expr {
 public:
  // The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  static Expr unary(Op op, Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  double value() const;
  const Expr& child(int i) const;

  bool is_constant() const { return op() == Op::Constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }
  // True when the tree contains no variable leaf.
  bool is_closed() const;
  bool contains(Op op) const;
  std::size_t size() const;
  int depth() const;

  double eval(double t) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;

};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);
Expr erf(const Expr& e);

Expr parse_expression(std::string_view source);
std::string print_expression(const Expr& e);

// Exact symbolic n-th derivative with respect to t. Throws
// NotDifferentiableError if the tree contains abs.
Expr differentiate(const Expr& e, int n = 1);

// Postfix program for fast repeated evaluation of one tree.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);
  double operator()(double t) const;

 private:
  struct Instr {
    Op op;
    double value;
  };
  std::vector<Instr> code_;
  int max_stack_ = 0;
};

// A real function of t backed by an expression tree, with its derivatives
// cached on construction up to the requested order.
class ScalarFunction {
 public:
  explicit ScalarFunction(Expr root, std::optional<Interval> domain = std::nullopt,
                          int cache_derivatives = 0);
  static ScalarFunction parse(std::string_view source,
                              std::optional<Interval> domain = std::nullopt);

  double operator()(double t) const { return program_(t); }
  double eval(double t) const { return program_(t); }

  const Expr& expr() const { return root_; }
  const std::optional<Interval>& domain() const { return domain_; }
  std::string to_string() const { return print_expression(root_); }

  bool is_constant() const { return root_.is_closed(); }
  bool differentiable() const { return !root_.contains(Op::Abs); }

  // n-th derivative; served from the cache when present.
  ScalarFunction derivative(int n = 1) const;
  int cached_orders() const { return static_cast<int>(derivs_.size()); }

 private:
  Expr root_;
  std::optional<Interval> domain_;
  CompiledExpr program_;
  std::vector<Expr> derivs_;
};

}  // namespace stieltjes
