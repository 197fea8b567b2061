#include <cmath>
#include <vector>

#include "doctest.h"
#include "smooth_family.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/quadrature.hpp"

using namespace stieltjes;
using stieltjes::testing::SmoothFamily;

namespace {

ScalarFunction fn(const char* src) { return ScalarFunction::parse(src); }

const Interval kPaper(0, 0.125);
constexpr double kPaperExact = 0.124351998772285591;
constexpr double kPaperPhi0 = 0.124392085161518375;

}  // namespace

TEST_CASE("phi_alpha: worked example and special cases") {
  const auto f = fn("exp(-t^2)");
  const auto u = fn("t");
  const double phi0 = phi_alpha(f, u, kPaper, 0.0, 1.0 / 32);
  CHECK(phi0 == doctest::Approx(kPaperPhi0).epsilon(1e-14));
  CHECK(std::fabs(phi0 - 0.1243920852) <= 1e-10);

  // Midpoint rule at x = m, alpha = 0.
  CHECK(phi_alpha(f, u, kPaper, 0.0, 0.0625) == doctest::Approx(0.125 * f(0.0625)).epsilon(1e-15));
  // Trapezoid at alpha = 1.
  CHECK(phi_alpha(f, u, kPaper, 1.0, 0.0625) ==
        doctest::Approx(0.0625 * (f(0) + f(0.125))).epsilon(1e-15));

  // Constant f telescopes.
  const auto u2 = fn("sin(t) + t^3");
  const Interval iv(-0.3, 1.2);
  for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(phi_alpha(fn("2.5"), u2, iv, alpha, 0.1) ==
          doctest::Approx(2.5 * (u2(1.2) - u2(-0.3))).epsilon(1e-14));
  }
  // Constant u gives zero.
  CHECK(phi_alpha(f, fn("4"), iv, 0.3, 0.2) == 0.0);
}

TEST_CASE("phi_alpha: node range") {
  const auto f = fn("t"), u = fn("t");
  const Interval iv(0, 1);
  CHECK_THROWS_AS(phi_alpha(f, u, iv, 0.5, 0.6), PreconditionError);
  CHECK_THROWS_AS(phi_alpha(f, u, iv, 0.0, -0.1), PreconditionError);
  CHECK_THROWS_AS(phi_alpha(f, u, iv, 1.5, 0.2), PreconditionError);
  CHECK_NOTHROW(phi_alpha(f, u, iv, 1.0, 0.9));
  CHECK_NOTHROW(phi_alpha(f, u, iv, 0.5, 0.5));
  CHECK_THROWS_AS(RuleSpec({RuleKind::MercerThreePoint, 0, 1.0}).validate(iv), PreconditionError);
  CHECK(parse_rule_kind("mercer-three-point") == RuleKind::MercerThreePoint);
  CHECK_THROWS_AS(parse_rule_kind("simpson"), PreconditionError);
}

TEST_CASE("alpha-affinity") {
  SmoothFamily family(21);
  for (int k = 0; k < 50; ++k) {
    const auto f = family.next();
    const auto u = family.next();
    const Interval iv = family.next_interval();
    const double alpha = family.uniform(0, 1);
    const double x = iv.a() + family.uniform(0, 0.5) * iv.length();
    const double mixed = phi_alpha(f, u, iv, alpha, x);
    const double combined =
        (1 - alpha) * phi_alpha(f, u, iv, 0.0, x) + alpha * phi_alpha(f, u, iv, 1.0, x);
    const double scale = std::fabs(phi_alpha(f, u, iv, 0.0, x)) + std::fabs(phi_alpha(f, u, iv, 1.0, x));
    CHECK(std::fabs(mixed - combined) <= 1e-13 * std::max(scale, 1e-300));
  }
}

TEST_CASE("convex combination of trapezoid and midpoint at x = m") {
  SmoothFamily family(22);
  for (int k = 0; k < 30; ++k) {
    const auto f = family.next();
    const auto u = family.next();
    const Interval iv = family.next_interval();
    const double a = iv.a(), b = iv.b(), m = iv.midpoint();
    const double alpha = family.uniform(0, 1);
    const double trapezoid_in_u = (u(m) - u(a)) * f(a) + (u(b) - u(m)) * f(b);
    const double midpoint = (u(b) - u(a)) * f(m);
    const double expected = alpha * trapezoid_in_u + (1 - alpha) * midpoint;
    const double scale = std::fabs(trapezoid_in_u) + std::fabs(midpoint);
    CHECK(std::fabs(phi_alpha(f, u, iv, alpha, m) - expected) <= 1e-13 * std::max(scale, 1e-300));
  }
}

TEST_CASE("alpha = 1 depends on x only through u(x)") {
  const auto f = fn("exp(t)");
  const auto u = fn("(t - 0.5)^2");  // u(0.2) == u(0.8)
  const Interval iv(0, 1);
  CHECK(phi_alpha(f, u, iv, 1.0, 0.2) == doctest::Approx(phi_alpha(f, u, iv, 1.0, 0.8)).epsilon(1e-14));
}

TEST_CASE("kernel branches") {
  const auto u = fn("t^2 + sin(t)");
  const Interval iv(0, 1);
  const double alpha = 0.3, x = 0.2;
  CHECK(kernel_value(u, iv, alpha, x, 0.0) == doctest::Approx(alpha * (u(0) - u(x))));
  CHECK(kernel_value(u, iv, alpha, x, 1.0) == doctest::Approx(alpha * (u(1) - u(x))));
  // t = x belongs to the first branch.
  CHECK(kernel_value(u, iv, alpha, x, x) == doctest::Approx((1 - alpha) * (u(x) - u(0))));
  // t = a + b - x belongs to the middle branch.
  CHECK(kernel_value(u, iv, alpha, x, 0.8) ==
        doctest::Approx((1 - alpha) * (u(0.8) - u(0.5)) + alpha * (u(0.8) - u(x))));
  for (double t : {0.0, 0.1, 0.2, 0.5, 0.9, 1.0}) {
    CHECK(kernel_value(u, iv, 1.0, 0.7, t) == doctest::Approx(u(t) - u(0.7)));
  }
  CHECK_THROWS_AS(kernel_value(u, iv, alpha, x, 1.1), PreconditionError);
}

TEST_CASE("kernel identity: integral of S_u df equals the rule error") {
  SmoothFamily family(23);
  constexpr double tol = 1e-10;
  for (int k = 0; k < 12; ++k) {
    const auto f = family.next();
    const auto u = family.next();
    const Interval iv = family.next_interval();
    const double alpha = k % 4 == 0 ? 1.0 : family.uniform(0, 1);
    const double x = iv.a() + family.uniform(0.05, 0.45) * iv.length();
    const std::vector<double> cuts{x, iv.a() + iv.b() - x};
    const OracleResult lhs = rs_integral(
        RealFn([&](double t) { return kernel_value(u, iv, alpha, x, t); }),
        RealFn([&](double t) { return f(t); }), iv, tol, cuts);
    const QuadratureResult rhs = error_term(f, u, iv, alpha, x, tol);
    REQUIRE(lhs.converged);
    REQUIRE(rhs.oracle_converged);
    CHECK(std::fabs(lhs.value - *rhs.actual_error) <= 20 * tol);
  }
}

TEST_CASE("kernel Lp norm") {
  // u = t, alpha = 1: S = t - x, so ||S||_2^2 = (x^3 + (1 - x)^3) / 3.
  const Interval iv(0, 1);
  const double x = 0.3;
  CHECK(kernel_lp_norm(fn("t"), iv, 1.0, x, 2) ==
        doctest::Approx(std::sqrt((x * x * x + 0.7 * 0.7 * 0.7) / 3)).epsilon(1e-10));
  // alpha = 0, u = t, x = a: S = t on [0, 1/2] piece and t - 1 beyond.
  CHECK(kernel_lp_norm(fn("t"), iv, 0.0, 0.0, 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("error_term: worked example") {
  const QuadratureResult r = error_term(fn("exp(-t^2)"), fn("t"), kPaper, 0.0, 1.0 / 32, 1e-12);
  REQUIRE(r.oracle_value);
  CHECK(r.oracle_converged);
  CHECK(std::fabs(*r.oracle_value - kPaperExact) <= 1e-12);
  CHECK(std::fabs(*r.actual_error - 4.00864e-5) <= 1e-10);
  CHECK(*r.actual_error == r.value - *r.oracle_value);

  const QuadratureResult c = error_term(fn("3"), fn("t^2"), Interval(0, 1), 0.4, 0.25);
  CHECK(std::fabs(*c.actual_error) <= 1e-10);
}

TEST_CASE("error_term is affine in alpha") {
  SmoothFamily family(24);
  for (int k = 0; k < 5; ++k) {
    const auto f = family.next();
    const auto u = family.next();
    const Interval iv = family.next_interval();
    const double x = iv.a() + 0.2 * iv.length();
    const double e0 = *error_term(f, u, iv, 0.0, x).actual_error;
    const double e1 = *error_term(f, u, iv, 1.0, x).actual_error;
    const double alpha = family.uniform(0, 1);
    CHECK(*error_term(f, u, iv, alpha, x).actual_error ==
          doctest::Approx((1 - alpha) * e0 + alpha * e1).epsilon(1e-6));
  }
}

TEST_CASE("composite rules") {
  const auto f = fn("exp(-t^2)");
  const auto u = fn("t");
  CHECK(composite_phi_alpha(f, u, kPaper, 1, 0.0, 0.25) == phi_alpha(f, u, kPaper, 0.0, 1.0 / 32));

  // Measured order 2: the error ratio per doubling is about 4.
  double previous = 0.0;
  for (int panels : {1, 2, 4, 8}) {
    const double err = std::fabs(composite_phi_alpha(f, u, kPaper, panels, 0.0, 0.25) - kPaperExact);
    if (panels > 1) {
      CHECK(err < previous);
      CHECK(previous / err >= 3.0);
    }
    previous = err;
  }

  const auto u2 = fn("exp(t) + t");
  const Interval iv(0.1, 0.9);
  for (int panels : {1, 3, 7, 16}) {
    CHECK(composite_phi_alpha(fn("-1.5"), u2, iv, panels, 0.6, 0.1) ==
          doctest::Approx(-1.5 * (u2(0.9) - u2(0.1))).epsilon(1e-14));
  }
  CHECK_NOTHROW(composite_phi_alpha(f, u, iv, 13, 0.2, 0.5));
  CHECK_THROWS_AS(composite_phi_alpha(f, u, iv, 0, 0.2, 0.1), PreconditionError);
  CHECK_THROWS_AS(composite_phi_alpha(f, u, iv, 2, 0.2, 0.7), PreconditionError);
  CHECK_NOTHROW(composite_phi_alpha(f, u, iv, 2, 1.0, 0.7));
}

TEST_CASE("Mercer rules") {
  const Interval unit(0, 1);
  CHECK(mercer_trapezoid(fn("exp(t)"), fn("t"), unit) ==
        doctest::Approx(0.5 * (1 + std::exp(1.0))).epsilon(1e-13));
  CHECK(mercer_trapezoid(fn("t"), fn("t^2"), unit) == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(mercer_trapezoid(fn("2"), fn("sin(t)"), unit) ==
        doctest::Approx(2 * std::sin(1.0)).epsilon(1e-13));

  const Interval iv(0.2, 1.4);
  const auto f = fn("cos(t)");
  const double m = iv.midpoint();
  CHECK(mercer_three_point(f, fn("t"), iv, m) ==
        doctest::Approx(0.3 * f(0.2) + 0.6 * f(m) + 0.3 * f(1.4)).epsilon(1e-13));
  CHECK(mercer_three_point(fn("t"), fn("t"), unit, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(mercer_three_point(fn("-3"), fn("t^3"), iv, 0.5) ==
        doctest::Approx(-3 * (1.4 * 1.4 * 1.4 - 0.008)).epsilon(1e-13));
  CHECK_THROWS_AS(mercer_three_point(f, fn("t"), iv, 0.2), PreconditionError);
}

TEST_CASE("classical trapezoid") {
  CHECK(classical_trapezoid(fn("exp(-t^2)"), kPaper) ==
        doctest::Approx(0.124031027312838).epsilon(1e-14));
  CHECK(classical_trapezoid(fn("t"), Interval(0, 1)) == 0.5);
  CHECK(classical_trapezoid(fn("7"), Interval(1, 3)) == 14.0);
  const QuadratureResult r = evaluate_rule({RuleKind::ClassicalTrapezoid, 0, 0}, fn("t"), fn("t^2"),
                                           Interval(0, 1));
  CHECK(std::fabs(*r.actual_error) <= 1e-12);
}
