#pragma once

// Random expression trees for property tests.

#include <random>

#include "stieltjes/expr.hpp"

namespace stieltjes::testing {

struct FuzzOptions {
  int max_depth = 6;
  bool allow_abs = true;
  double constant_range = 3.0;
};

class ExprFuzzer {
 public:
  explicit ExprFuzzer(std::uint64_t seed, FuzzOptions options = {})
      : rng_(seed), options_(options) {}

  Expr next() { return gen(options_.max_depth); }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  Expr leaf() {
    if (uniform(0, 1) < 0.6) return Expr::variable();
    const double r = options_.constant_range;
    // Mix "nice" decimals with arbitrary doubles so printing is exercised
    // on both short and full-precision literals.
    if (uniform(0, 1) < 0.5) {
      return Expr::constant(std::round(uniform(-r, r) * 4.0) / 4.0);
    }
    return Expr::constant(uniform(-r, r));
  }

  Expr gen(int depth) {
    if (depth <= 1 || uniform(0, 1) < 0.25) return leaf();
    static constexpr Op kBinary[] = {Op::Add, Op::Subtract, Op::Multiply, Op::Divide, Op::Power};
    static constexpr Op kUnary[] = {Op::Negate, Op::Exp, Op::Ln,  Op::Sin,
                                    Op::Cos,    Op::Sqrt, Op::Erf, Op::Abs};
    if (uniform(0, 1) < 0.55) {
      const Op op = kBinary[std::uniform_int_distribution<int>(0, 4)(rng_)];
      if (op == Op::Power) {
        // Keep exponents small so values stay in floating range.
        Expr expo = uniform(0, 1) < 0.7
                        ? Expr::constant(std::uniform_int_distribution<int>(-2, 3)(rng_))
                        : gen(std::min(depth - 1, 2));
        return Expr::binary(op, gen(depth - 1), expo);
      }
      return Expr::binary(op, gen(depth - 1), gen(depth - 1));
    }
    const int count = options_.allow_abs ? 8 : 7;
    const Op op = kUnary[std::uniform_int_distribution<int>(0, count - 1)(rng_)];
    return Expr::unary(op, gen(depth - 1));
  }

  std::mt19937_64 rng_;
  FuzzOptions options_;
};

}  // namespace stieltjes::testing

#include <cmath>
#include <limits>
#include <optional>

#include "stieltjes/errors.hpp"

namespace stieltjes::testing {

inline std::optional<double> try_eval(const Expr& e, double t) {
  try {
    return e.eval(t);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

enum class FdOutcome { Agrees, Disagrees, Skipped };

// Compares a symbolic derivative against a central difference with step
// h = 1e-6 * max(1, |t|). Points where the difference quotient is not
// numerically meaningful are skipped: undefined neighbours, |f'| <= 1e-8,
// rounding noise above 1e-7 relative, or a step-halving disagreement above
// 1e-6 relative (the function is too curved there for this step).
inline FdOutcome compare_with_central_difference(const Expr& f, const Expr& df, double t,
                                                 double rel_tol = 1e-5) {
  const double h = 1e-6 * std::max(1.0, std::fabs(t));
  const auto sym = try_eval(df, t);
  const auto fm = try_eval(f, t - h);
  const auto fp = try_eval(f, t + h);
  const auto fm2 = try_eval(f, t - 2 * h);
  const auto fp2 = try_eval(f, t + 2 * h);
  if (!sym || !fm || !fp || !fm2 || !fp2) return FdOutcome::Skipped;
  if (std::fabs(*sym) <= 1e-8) return FdOutcome::Skipped;
  const double fd = (*fp - *fm) / (2 * h);
  const double fd2 = (*fp2 - *fm2) / (4 * h);
  const double scale = std::max({std::fabs(*fm), std::fabs(*fp), std::fabs(*fm2), std::fabs(*fp2)});
  const double rounding = std::numeric_limits<double>::epsilon() * scale / h;
  if (rounding > 1e-7 * std::fabs(*sym)) return FdOutcome::Skipped;
  if (std::fabs(fd - fd2) > 1e-6 * std::fabs(*sym)) return FdOutcome::Skipped;
  return std::fabs(*sym - fd) <= rel_tol * std::fabs(*sym) ? FdOutcome::Agrees
                                                          : FdOutcome::Disagrees;
}

}  // namespace stieltjes::testing
