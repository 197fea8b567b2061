#pragma once

// The two/three-point rule family Phi_alpha for integrals of f du, its Peano
// kernel, composite versions and the reference rules it is compared against.
//
//   Phi_alpha(f, u; x) = (1 - alpha) {[u(m) - u(a)] f(x) + [u(b) - u(m)] f(a + b - x)}
//                      + alpha {[u(x) - u(a)] f(a) + [u(b) - u(x)] f(b)},   m = (a + b) / 2
//
// alpha = 0 is a two-point midpoint-type rule, alpha = 1 a generalized
// trapezoid rule. The node x ranges over [a, m] for alpha < 1 and over [a, b]
// for alpha = 1.

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stieltjes/expr.hpp"
#include "stieltjes/interval.hpp"
#include "stieltjes/oracle.hpp"

namespace stieltjes {

enum class RuleKind { PhiFamily, MercerTrapezoid, MercerThreePoint, ClassicalTrapezoid };

std::string_view to_string(RuleKind kind);
// Accepts "phi-family", "mercer-trapezoid", "mercer-three-point",
// "classical-trapezoid"; throws PreconditionError otherwise.
RuleKind parse_rule_kind(std::string_view name);

struct RuleSpec {
  RuleKind kind = RuleKind::PhiFamily;
  double alpha = 0.0;
  double x = 0.0;

  // Throws PreconditionError when alpha or x violate the admissible ranges.
  void validate(const Interval& iv) const;
};

struct QuadratureResult {
  double value = 0.0;
  RuleSpec rule;
  std::optional<double> oracle_value;
  std::optional<double> actual_error;  // value - oracle_value
  bool oracle_converged = true;
  double oracle_tolerance = 0.0;  // achieved by the oracle
};

double phi_alpha(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv, double alpha,
                 double x);

// S_u(t; x). Branches are the half-open pieces [a, x], (x, a + b - x],
// (a + b - x, b].
double kernel_value(const ScalarFunction& u, const Interval& iv, double alpha, double x, double t);

// ||S_u(.; x)||_p, integrated piecewise between the kernel's jump points.
double kernel_lp_norm(const ScalarFunction& u, const Interval& iv, double alpha, double x, double p,
                      double tol = kDefaultOracleTol);

QuadratureResult error_term(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                            double alpha, double x, double tol = kDefaultOracleTol,
                            std::span<const double> breakpoints = {});

// Uniform partition into `panels` pieces with node x_i = a_i + theta (b_i - a_i)
// on each. Panel values are combined by pairwise summation in panel order.
double composite_phi_alpha(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                           int panels, double alpha, double theta);

// [G - g(a)] f(a) + [g(b) - G] f(b), G the mean of g over [a, b].
double mercer_trapezoid(const ScalarFunction& f, const ScalarFunction& g, const Interval& iv,
                        double tol = kDefaultOracleTol);

// [G(a,x) - g(a)] f(a) + [G(x,b) - G(a,x)] f(x) + [g(b) - G(x,b)] f(b).
double mercer_three_point(const ScalarFunction& f, const ScalarFunction& g, const Interval& iv,
                          double x, double tol = kDefaultOracleTol);

// Main term (b - a)(f(a) + f(b)) / 2 only. The remainder -(b - a)^3 f''(xi) / 12
// involves an unknown xi and is not evaluated.
double classical_trapezoid(const ScalarFunction& f, const Interval& iv);

// Dispatches on rule.kind; u doubles as the Mercer weight g.
double apply_rule(const RuleSpec& rule, const ScalarFunction& f, const ScalarFunction& u,
                  const Interval& iv, double tol = kDefaultOracleTol);

// apply_rule plus the oracle value of the integral of f du.
QuadratureResult evaluate_rule(const RuleSpec& rule, const ScalarFunction& f,
                               const ScalarFunction& u, const Interval& iv,
                               double tol = kDefaultOracleTol,
                               std::span<const double> breakpoints = {});

}  // namespace stieltjes
