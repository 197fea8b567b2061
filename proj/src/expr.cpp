#include "stieltjes/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "expr_ops.hpp"
#include "stieltjes/errors.hpp"

namespace stieltjes {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::array<Expr, 2> children;
};

int arity(Op op) {
  switch (op) {
    case Op::Constant:
    case Op::Variable:
      return 0;
    case Op::Add:
    case Op::Subtract:
    case Op::Multiply:
    case Op::Divide:
    case Op::Power:
      return 2;
    default:
      return 1;
  }
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Constant: return "constant";
    case Op::Variable: return "variable";
    case Op::Add: return "add";
    case Op::Subtract: return "subtract";
    case Op::Multiply: return "multiply";
    case Op::Divide: return "divide";
    case Op::Power: return "power";
    case Op::Negate: return "negate";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Erf: return "erf";
  }
  return "?";
}

// A null node reads as the constant 0; Node::children default-construct
// through here, so it cannot allocate.
Expr::Expr() : node_(nullptr) {}

Op Expr::op() const { return node_ ? node_->op : Op::Constant; }
double Expr::value() const { return node_ ? node_->value : 0.0; }

const Expr& Expr::child(int i) const {
  if (!node_ || i < 0 || i >= arity(node_->op)) {
    throw std::out_of_range("Expr::child index out of range");
  }
  return node_->children[static_cast<std::size_t>(i)];
}

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("constant must be finite");
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand) {
  if (arity(op) != 1) throw std::invalid_argument("Expr::unary: op is not unary");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children[0] = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (arity(op) != 2) throw std::invalid_argument("Expr::binary: op is not binary");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children[0] = std::move(lhs);
  n->children[1] = std::move(rhs);
  return Expr(std::move(n));
}

bool Expr::is_closed() const {
  switch (arity(op())) {
    case 0:
      return op() == Op::Constant;
    case 1:
      return child(0).is_closed();
    default:
      return child(0).is_closed() && child(1).is_closed();
  }
}

bool Expr::contains(Op target) const {
  if (op() == target) return true;
  for (int i = 0; i < arity(op()); ++i) {
    if (child(i).contains(target)) return true;
  }
  return false;
}

std::size_t Expr::size() const {
  std::size_t s = 1;
  for (int i = 0; i < arity(op()); ++i) s += child(i).size();
  return s;
}

int Expr::depth() const {
  int d = 0;
  for (int i = 0; i < arity(op()); ++i) d = std::max(d, child(i).depth());
  return d + 1;
}

double Expr::eval(double t) const {
  switch (op()) {
    case Op::Constant:
      return value();
    case Op::Variable:
      return t;
    default:
      break;
  }
  if (arity(op()) == 1) return detail::apply_unary(op(), child(0).eval(t));
  const double lhs = child(0).eval(t);
  const double rhs = child(1).eval(t);
  return detail::apply_binary(op(), lhs, rhs);
}

// Folding builders. Constant subtrees collapse when they evaluate to a finite
// value; additive and multiplicative identities are dropped so repeated
// differentiation keeps trees small.
namespace {

std::optional<Expr> fold(const Expr& e) {
  if (!e.is_closed() || e.is_constant()) return std::nullopt;
  try {
    return Expr::constant(e.eval(0.0));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

Expr folded(Expr e) {
  if (auto c = fold(e)) return *c;
  return e;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return folded(Expr::binary(Op::Add, a, b));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return folded(Expr::binary(Op::Subtract, a, b));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return folded(Expr::binary(Op::Multiply, a, b));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  return folded(Expr::binary(Op::Divide, a, b));
}

Expr operator-(const Expr& a) {
  if (a.op() == Op::Negate) return a.child(0);
  if (a.is_constant()) return Expr::constant(-a.value());
  return Expr::unary(Op::Negate, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  return folded(Expr::binary(Op::Power, base, exponent));
}

Expr exp(const Expr& e) { return folded(Expr::unary(Op::Exp, e)); }
Expr ln(const Expr& e) { return folded(Expr::unary(Op::Ln, e)); }
Expr sin(const Expr& e) { return folded(Expr::unary(Op::Sin, e)); }
Expr cos(const Expr& e) { return folded(Expr::unary(Op::Cos, e)); }
Expr sqrt(const Expr& e) { return folded(Expr::unary(Op::Sqrt, e)); }
Expr abs(const Expr& e) { return folded(Expr::unary(Op::Abs, e)); }
Expr erf(const Expr& e) { return folded(Expr::unary(Op::Erf, e)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdditive = 1;
constexpr int kPrecMultiplicative = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Subtract:
      return kPrecAdditive;
    case Op::Multiply:
    case Op::Divide:
      return kPrecMultiplicative;
    case Op::Negate:
      return kPrecUnary;
    case Op::Power:
      return kPrecPower;
    case Op::Constant:
      return std::signbit(e.value()) ? kPrecUnary : kPrecAtom;
    default:
      return kPrecAtom;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number failed");
  return std::string(buf.data(), end);
}

void print_to(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print_to(e, out);
    out += ')';
  } else {
    print_to(e, out);
  }
}

// Right operands that begin with a minus sign are parenthesized for
// readability ("t^(-2)", "a * (-b)"); the grammar would accept them bare.
void print_right_operand(const Expr& e, int min_prec, std::string& out) {
  print_operand(e, precedence(e) == kPrecUnary ? kPrecAtom : min_prec, out);
}

void print_to(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Constant:
      out += format_number(e.value());
      return;
    case Op::Variable:
      out += 't';
      return;
    case Op::Add:
    case Op::Subtract:
      print_operand(e.child(0), kPrecAdditive, out);
      out += e.op() == Op::Add ? " + " : " - ";
      print_right_operand(e.child(1), kPrecMultiplicative, out);
      return;
    case Op::Multiply:
    case Op::Divide:
      print_operand(e.child(0), kPrecMultiplicative, out);
      out += e.op() == Op::Multiply ? "*" : "/";
      print_right_operand(e.child(1), kPrecUnary, out);
      return;
    case Op::Power:
      print_operand(e.child(0), kPrecAtom, out);
      out += '^';
      print_right_operand(e.child(1), kPrecPower, out);
      return;
    case Op::Negate:
      out += '-';
      print_operand(e.child(0), kPrecUnary, out);
      return;
    default:
      out += op_name(e.op());
      out += '(';
      print_to(e.child(0), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print_expression(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledExpr::CompiledExpr(const Expr& e) {
  // Post-order emission; the stack depth needed is tracked as we go.
  struct Frame {
    const Expr* node;
    bool expanded;
  };
  std::vector<Frame> work{{&e, false}};
  int depth = 0;
  while (!work.empty()) {
    Frame f = work.back();
    work.pop_back();
    const int k = arity(f.node->op());
    if (k == 0) {
      code_.push_back({f.node->op(), f.node->value()});
      max_stack_ = std::max(max_stack_, ++depth);
    } else if (f.expanded) {
      code_.push_back({f.node->op(), 0.0});
      depth -= k - 1;
    } else {
      work.push_back({f.node, true});
      for (int i = k - 1; i >= 0; --i) work.push_back({&f.node->child(i), false});
    }
  }
}

double CompiledExpr::operator()(double t) const {
  constexpr int kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_stack_ > kInline) {
    heap_stack.resize(static_cast<std::size_t>(max_stack_));
    stack = heap_stack.data();
  }
  int sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Constant:
        stack[sp++] = in.value;
        break;
      case Op::Variable:
        stack[sp++] = t;
        break;
      case Op::Add:
      case Op::Subtract:
      case Op::Multiply:
      case Op::Divide:
      case Op::Power:
        --sp;
        stack[sp - 1] = detail::apply_binary(in.op, stack[sp - 1], stack[sp]);
        break;
      default:
        stack[sp - 1] = detail::apply_unary(in.op, stack[sp - 1]);
        break;
    }
  }
  return code_.empty() ? 0.0 : stack[0];
}

// ---------------------------------------------------------------------------

ScalarFunction::ScalarFunction(Expr root, std::optional<Interval> domain, int cache_derivatives)
    : root_(std::move(root)), domain_(domain), program_(root_) {
  Expr current = root_;
  for (int k = 0; k < cache_derivatives; ++k) {
    current = differentiate(current, 1);
    derivs_.push_back(current);
  }
}

ScalarFunction ScalarFunction::parse(std::string_view source, std::optional<Interval> domain) {
  return ScalarFunction(parse_expression(source), domain);
}

ScalarFunction ScalarFunction::derivative(int n) const {
  if (n < 1) throw PreconditionError("derivative order must be >= 1");
  if (n <= cached_orders()) {
    return ScalarFunction(derivs_[static_cast<std::size_t>(n - 1)], domain_);
  }
  return ScalarFunction(differentiate(root_, n), domain_);
}

}  // namespace stieltjes
