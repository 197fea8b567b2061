#include "stieltjes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {
namespace {

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in [0, 1]");
}

void require_phi_node(const Interval& iv, double alpha, double x) {
  require_alpha(alpha);
  const double hi = alpha == 1.0 ? iv.b() : iv.midpoint();
  if (!(x >= iv.a() && x <= hi)) {
    throw PreconditionError(alpha == 1.0 ? "node x must lie in [a, b]"
                                         : "node x must lie in [a, (a+b)/2] when alpha < 1");
  }
}

// The kernel on one of its three pieces, continuous up to both ends.
double kernel_branch(const ScalarFunction& u, double alpha, double ux, double anchor, double t) {
  const double ut = u(t);
  return (1.0 - alpha) * (ut - u(anchor)) + alpha * (ut - ux);
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::PhiFamily: return "phi-family";
    case RuleKind::MercerTrapezoid: return "mercer-trapezoid";
    case RuleKind::MercerThreePoint: return "mercer-three-point";
    case RuleKind::ClassicalTrapezoid: return "classical-trapezoid";
  }
  return "?";
}

RuleKind parse_rule_kind(std::string_view name) {
  for (RuleKind k : {RuleKind::PhiFamily, RuleKind::MercerTrapezoid, RuleKind::MercerThreePoint,
                     RuleKind::ClassicalTrapezoid}) {
    if (to_string(k) == name) return k;
  }
  throw PreconditionError("unknown rule kind '" + std::string(name) + "'");
}

void RuleSpec::validate(const Interval& iv) const {
  switch (kind) {
    case RuleKind::PhiFamily:
      require_phi_node(iv, alpha, x);
      break;
    case RuleKind::MercerThreePoint:
      if (!(x > iv.a() && x < iv.b())) throw PreconditionError("node x must lie in (a, b)");
      break;
    default:
      break;
  }
}

double phi_alpha(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv, double alpha,
                 double x) {
  require_phi_node(iv, alpha, x);
  const double a = iv.a(), b = iv.b(), m = iv.midpoint();
  const double ua = u(a), ub = u(b);
  // Pure alpha = 0 or 1 skips the unused half; the weight-0 term would add
  // exactly zero anyway.
  double midpoint_part = 0.0, trapezoid_part = 0.0;
  if (alpha != 1.0) {
    const double um = u(m);
    midpoint_part = (um - ua) * f(x) + (ub - um) * f(a + b - x);
  }
  if (alpha != 0.0) {
    const double ux = u(x);
    trapezoid_part = (ux - ua) * f(a) + (ub - ux) * f(b);
  }
  return (1.0 - alpha) * midpoint_part + alpha * trapezoid_part;
}

double kernel_value(const ScalarFunction& u, const Interval& iv, double alpha, double x, double t) {
  require_phi_node(iv, alpha, x);
  if (!iv.contains(t)) throw PreconditionError("kernel argument t outside [a, b]");
  const double a = iv.a(), b = iv.b();
  const double ux = u(x);
  if (t <= x) return kernel_branch(u, alpha, ux, a, t);
  if (t <= a + b - x) return kernel_branch(u, alpha, ux, iv.midpoint(), t);
  return kernel_branch(u, alpha, ux, b, t);
}

double kernel_lp_norm(const ScalarFunction& u, const Interval& iv, double alpha, double x, double p,
                      double tol) {
  require_phi_node(iv, alpha, x);
  if (!(p >= 1.0) || !std::isfinite(p)) throw PreconditionError("p must be finite and >= 1");
  const double a = iv.a(), b = iv.b();
  const double ux = u(x);
  struct Piece {
    double lo, hi, anchor;
  };
  std::vector<Piece> pieces;
  if (alpha == 1.0) {
    // Single branch u(t) - u(x); split at x for the kink of |.|.
    pieces = {{a, x, a}, {x, b, a}};
  } else {
    pieces = {{a, x, a}, {x, a + b - x, iv.midpoint()}, {a + b - x, b, b}};
  }
  double total = 0.0;
  for (const Piece& piece : pieces) {
    if (!(piece.lo < piece.hi)) continue;
    const OracleResult r = riemann_integral(
        RealFn([&](double t) {
          return std::pow(std::fabs(kernel_branch(u, alpha, ux, piece.anchor, t)), p);
        }),
        Interval(piece.lo, piece.hi), tol);
    if (!r.converged) throw ConvergenceError("kernel norm integral did not converge", r.value);
    total += r.value;
  }
  return std::pow(total, 1.0 / p);
}

QuadratureResult error_term(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                            double alpha, double x, double tol,
                            std::span<const double> breakpoints) {
  return evaluate_rule(RuleSpec{RuleKind::PhiFamily, alpha, x}, f, u, iv, tol, breakpoints);
}

double composite_phi_alpha(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                           int panels, double alpha, double theta) {
  if (panels < 1) throw PreconditionError("panels must be >= 1");
  require_alpha(alpha);
  const double theta_max = alpha == 1.0 ? 1.0 : 0.5;
  if (!(theta >= 0.0 && theta <= theta_max)) {
    throw PreconditionError(alpha == 1.0 ? "theta must lie in [0, 1]"
                                         : "theta must lie in [0, 1/2] when alpha < 1");
  }
  const double a = iv.a(), h = iv.length() / panels;
  std::vector<double> values(static_cast<std::size_t>(panels));
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == panels ? iv.b() : a + (i + 1) * h;
    const Interval piece(lo, hi);
    // Clamp guards the rounding of lo + theta h past the admissible end.
    const double x = std::min(lo + theta * (hi - lo), alpha == 1.0 ? hi : piece.midpoint());
    values[static_cast<std::size_t>(i)] = phi_alpha(f, u, piece, alpha, x);
  }
  return pairwise_sum(values);
}

double mercer_trapezoid(const ScalarFunction& f, const ScalarFunction& g, const Interval& iv,
                        double tol) {
  const double G = interval_mean(g, iv, tol);
  return (G - g(iv.a())) * f(iv.a()) + (g(iv.b()) - G) * f(iv.b());
}

double mercer_three_point(const ScalarFunction& f, const ScalarFunction& g, const Interval& iv,
                          double x, double tol) {
  if (!(x > iv.a() && x < iv.b())) throw PreconditionError("node x must lie in (a, b)");
  const double left = interval_mean(g, Interval(iv.a(), x), tol);
  const double right = interval_mean(g, Interval(x, iv.b()), tol);
  return (left - g(iv.a())) * f(iv.a()) + (right - left) * f(x) + (g(iv.b()) - right) * f(iv.b());
}

double classical_trapezoid(const ScalarFunction& f, const Interval& iv) {
  return iv.length() * (f(iv.a()) + f(iv.b())) / 2.0;
}

double apply_rule(const RuleSpec& rule, const ScalarFunction& f, const ScalarFunction& u,
                  const Interval& iv, double tol) {
  rule.validate(iv);
  switch (rule.kind) {
    case RuleKind::PhiFamily: return phi_alpha(f, u, iv, rule.alpha, rule.x);
    case RuleKind::MercerTrapezoid: return mercer_trapezoid(f, u, iv, tol);
    case RuleKind::MercerThreePoint: return mercer_three_point(f, u, iv, rule.x, tol);
    case RuleKind::ClassicalTrapezoid: return classical_trapezoid(f, iv);
  }
  throw PreconditionError("unknown rule kind");
}

QuadratureResult evaluate_rule(const RuleSpec& rule, const ScalarFunction& f,
                               const ScalarFunction& u, const Interval& iv, double tol,
                               std::span<const double> breakpoints) {
  QuadratureResult result;
  result.rule = rule;
  result.value = apply_rule(rule, f, u, iv, tol);
  // The classical trapezoid approximates the plain integral of f dt.
  const OracleResult oracle = rule.kind == RuleKind::ClassicalTrapezoid
                                  ? riemann_integral(f, iv, tol)
                                  : rs_integral(f, u, iv, tol, breakpoints);
  result.oracle_value = oracle.value;
  result.actual_error = result.value - oracle.value;
  result.oracle_converged = oracle.converged;
  result.oracle_tolerance = oracle.achieved_tolerance;
  return result;
}

}  // namespace stieltjes
