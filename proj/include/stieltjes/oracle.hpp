#pragma once

// Reference integration. Everything else in the library is checked against
// these routines, so they favour robustness over speed.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stieltjes/expr.hpp"
#include "stieltjes/interval.hpp"
#include "stieltjes/special_functions.hpp"

namespace stieltjes {

using RealFn = std::function<double(double)>;

inline constexpr double kDefaultOracleTol = 1e-10;

struct OracleResult {
  double value = 0.0;
  double achieved_tolerance = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
  bool converged = false;
};

// Adaptive Simpson with Richardson-corrected panels. Each panel is accepted
// once |S(left) + S(right) - S(whole)| <= 15 * (its share of tol).
OracleResult riemann_integral(const RealFn& w, const Interval& iv, double tol = kDefaultOracleTol);
OracleResult riemann_integral(const ScalarFunction& w, const Interval& iv,
                              double tol = kDefaultOracleTol);

struct StieltjesOptions {
  int max_levels = 22;
  // Known jumps or kinks of the integrator, strictly inside (a, b).
  std::vector<double> breakpoints;
};

// Riemann-Stieltjes sums sum f(tau_i) [u(t_{i+1}) - u(t_i)] with midpoint
// tags over dyadic refinements of the partition seeded by the breakpoints.
// A jump at a breakpoint c contributes f(c) (u(c+eps) - u(c-eps)) with
// eps = 1e-12 (b - a). Converged once two successive levels differ by < tol.
OracleResult stieltjes_sums(const RealFn& f, const RealFn& u, const Interval& iv, double tol,
                            const StieltjesOptions& options);

// Integral of f du. With a differentiable u and no breakpoints the sums are
// cross-checked against the Riemann integral of f u', whose value is
// returned; otherwise the converged sum is returned.
OracleResult rs_integral(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                         double tol = kDefaultOracleTol, std::span<const double> breakpoints = {});
OracleResult rs_integral(const RealFn& f, const RealFn& u, const Interval& iv,
                         double tol = kDefaultOracleTol, std::span<const double> breakpoints = {});

// (1 / (b - a)) * integral of g over iv.
double interval_mean(const ScalarFunction& g, const Interval& iv, double tol = kDefaultOracleTol);

// Sorted, de-duplicated breakpoints strictly inside iv; throws on points
// outside [a, b].
std::vector<double> normalize_breakpoints(std::span<const double> breakpoints, const Interval& iv);

}  // namespace stieltjes
