#pragma once

// Pointwise semantics shared by tree evaluation and compiled programs.

#include <cmath>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/expr.hpp"
#include "stieltjes/special_functions.hpp"

namespace stieltjes::detail {

inline double checked(double v, Op op) {
  if (!std::isfinite(v)) {
    throw DomainError("non-finite result in " + std::string(op_name(op)));
  }
  return v;
}

inline double apply_unary(Op op, double x) {
  switch (op) {
    case Op::Negate:
      return -x;
    case Op::Exp:
      return checked(std::exp(x), op);
    case Op::Ln:
      if (x <= 0.0) throw DomainError("ln of non-positive argument");
      return std::log(x);
    case Op::Sin:
      return std::sin(x);
    case Op::Cos:
      return std::cos(x);
    case Op::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative argument");
      return std::sqrt(x);
    case Op::Abs:
      return std::fabs(x);
    case Op::Erf:
      return stieltjes::erf(x);
    default:
      throw std::logic_error("apply_unary: not a unary op");
  }
}

inline double apply_binary(Op op, double x, double y) {
  switch (op) {
    case Op::Add:
      return checked(x + y, op);
    case Op::Subtract:
      return checked(x - y, op);
    case Op::Multiply:
      return checked(x * y, op);
    case Op::Divide:
      if (y == 0.0) throw DomainError("division by zero");
      return checked(x / y, op);
    case Op::Power:
      if (x < 0.0 && y != std::trunc(y)) {
        throw DomainError("negative base with non-integer exponent");
      }
      if (x == 0.0 && y < 0.0) throw DomainError("division by zero in power");
      return checked(std::pow(x, y), op);
    default:
      throw std::logic_error("apply_binary: not a binary op");
  }
}

}  // namespace stieltjes::detail
