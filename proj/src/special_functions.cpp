#include "stieltjes/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace stieltjes {
namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

double erf_series(double x) {
  // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
  const double x2 = x * x;
  double power = x;  // (-1)^n x^(2n+1) / n!
  double sum = x;
  for (int n = 1; n < 60; ++n) {
    power *= -x2 / n;
    const double term = power / (2 * n + 1);
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

// erfc(x) for x > 1 through
//   erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm.
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 2000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  if (std::fabs(x) <= 1.0) return erf_series(x);
  const double complement = erfc_continued_fraction(std::fabs(x));
  return x > 0 ? 1.0 - complement : complement - 1.0;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (std::fabs(x) <= 1.0) return 1.0 - erf_series(x);
  if (x > 0) return erfc_continued_fraction(x);
  return 2.0 - erfc_continued_fraction(-x);
}

}  // namespace stieltjes
