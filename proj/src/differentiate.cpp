#include <numbers>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/expr.hpp"

namespace stieltjes {
namespace {

Expr d(const Expr& e) {
  const auto c = [](double v) { return Expr::constant(v); };
  switch (e.op()) {
    case Op::Constant:
      return c(0.0);
    case Op::Variable:
      return c(1.0);
    case Op::Add:
      return d(e.child(0)) + d(e.child(1));
    case Op::Subtract:
      return d(e.child(0)) - d(e.child(1));
    case Op::Multiply: {
      const Expr& f = e.child(0);
      const Expr& g = e.child(1);
      return d(f) * g + f * d(g);
    }
    case Op::Divide: {
      const Expr& f = e.child(0);
      const Expr& g = e.child(1);
      if (g.is_closed()) return d(f) / g;
      return (d(f) * g - f * d(g)) / (g * g);
    }
    case Op::Power: {
      const Expr& base = e.child(0);
      const Expr& expo = e.child(1);
      if (expo.is_closed()) return expo * pow(base, expo - c(1.0)) * d(base);
      if (base.is_closed()) return e * ln(base) * d(expo);
      return e * (d(expo) * ln(base) + expo * d(base) / base);
    }
    case Op::Negate:
      return -d(e.child(0));
    case Op::Exp:
      return e * d(e.child(0));
    case Op::Ln:
      return d(e.child(0)) / e.child(0);
    case Op::Sin:
      return cos(e.child(0)) * d(e.child(0));
    case Op::Cos:
      return -(sin(e.child(0)) * d(e.child(0)));
    case Op::Sqrt:
      return d(e.child(0)) / (c(2.0) * e);
    case Op::Erf: {
      const Expr& arg = e.child(0);
      return c(2.0 * std::numbers::inv_sqrtpi) * exp(-(arg * arg)) * d(arg);
    }
    case Op::Abs:
      break;
  }
  throw NotDifferentiableError(std::string(op_name(e.op())));
}

}  // namespace

Expr differentiate(const Expr& e, int n) {
  if (n < 1) throw PreconditionError("differentiate: order must be >= 1");
  if (e.contains(Op::Abs)) throw NotDifferentiableError(std::string(op_name(Op::Abs)));
  Expr out = e;
  for (int k = 0; k < n; ++k) out = d(out);
  return out;
}

}  // namespace stieltjes
