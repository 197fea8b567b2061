#include <cmath>
#include <numbers>

#include "doctest.h"
#include "smooth_family.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/funcspace.hpp"

using namespace stieltjes;
using stieltjes::testing::SmoothFamily;

namespace {
ScalarFunction fn(const char* src) { return ScalarFunction::parse(src); }
}  // namespace

TEST_CASE("total variation of known functions") {
  const double two_pi = 2 * std::numbers::pi;
  const CertValue tv = estimate_total_variation(fn("sin(t)"), Interval(0, two_pi), 1e-10);
  CHECK(std::fabs(tv.value - 4.0) <= 1e-6);
  CHECK(tv.provenance == Provenance::Estimated);

  // Monotone functions: variation is |f(b) - f(a)|.
  CHECK(estimate_total_variation(fn("exp(-t^2)"), Interval(0, 0.125)).value ==
        doctest::Approx(1 - std::exp(-1.0 / 64)).epsilon(1e-12));
  CHECK(estimate_total_variation(fn("3"), Interval(0, 1)).value == 0.0);

  // Kink at 1/3 seeded as a breakpoint is hit exactly.
  const double bp[] = {1.0 / 3};
  CHECK(estimate_total_variation(fn("abs(t - 1/3)"), Interval(0, 1), 1e-12, bp).value ==
        doctest::Approx(1.0 / 3 + 2.0 / 3).epsilon(1e-14));
}

TEST_CASE("total variation trace never decreases") {
  SmoothFamily family(11);
  for (int k = 0; k < 20; ++k) {
    const ScalarFunction f = family.next();
    const Interval iv = family.next_interval();
    const VariationTrace trace = total_variation_trace(f, iv, 1e-10);
    for (std::size_t i = 1; i < trace.levels.size(); ++i) {
      CHECK(trace.levels[i] >= trace.levels[i - 1]);
    }
  }
}

TEST_CASE("total variation non-convergence throws") {
  // sin(1/t) near 0 has unbounded variation.
  CHECK_THROWS_AS(estimate_total_variation(fn("sin(1/t)"), Interval(1e-4, 1), 1e-14),
                  ConvergenceError);
}

TEST_CASE("Lipschitz estimates") {
  const CertValue lip = estimate_lipschitz(fn("exp(-t^2)"), Interval(0, 0.125));
  CHECK(std::fabs(lip.value - 0.2461241092513521) <= 1e-6);
  CHECK(estimate_lipschitz(fn("t^2"), Interval(0, 1)).value == doctest::Approx(2.0));
  CHECK(estimate_lipschitz(fn("7"), Interval(0, 1)).provenance == Provenance::Exact);
  // Falls back to difference quotients on abs.
  CHECK(estimate_lipschitz(fn("abs(2*t - 1)"), Interval(0, 1)).value ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Lipschitz estimate dominates every sampled difference quotient") {
  SmoothFamily family(5);
  for (int k = 0; k < 30; ++k) {
    const ScalarFunction f = family.next();
    const Interval iv = family.next_interval();
    const double lip = estimate_lipschitz(f, iv).value;
    for (int i = 0; i < 16; ++i) {
      const double y = iv.a() + iv.length() * family.uniform(0, 1);
      const double z = iv.a() + iv.length() * family.uniform(0, 1);
      if (y == z) continue;
      // Mean value theorem: the quotient equals f' somewhere; grid sup is low
      // by O(h^2), so allow a small relative slack.
      CHECK(std::fabs(f(y) - f(z)) / std::fabs(y - z) <= lip * (1 + 1e-5) + 1e-12);
    }
  }
}

TEST_CASE("Holder estimates") {
  const CertValue h = estimate_holder(fn("sqrt(t)"), 0.5, Interval(0, 1));
  CHECK(h.value >= 0.95);
  CHECK(h.value <= 1.0 + 1e-12);
  CHECK_THROWS_AS(estimate_holder(fn("t"), 1.5, Interval(0, 1)), PreconditionError);

  SmoothFamily family(3);
  for (int k = 0; k < 10; ++k) {
    const ScalarFunction f = family.next();
    const Interval iv = family.next_interval();
    const double pairs = estimate_holder(f, 1.0, iv, 200).value;
    const double adjacent = max_difference_quotient(f, iv, 200);
    CHECK(std::fabs(pairs - adjacent) <= 1e-12 * std::max(1.0, adjacent));
  }
}

TEST_CASE("Lp norms") {
  CHECK(lp_norm(fn("t"), 2, Interval(0, 1)).value ==
        doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  const CertValue c = lp_norm(fn("2"), 3, Interval(0, 8));
  CHECK(c.provenance == Provenance::Exact);
  CHECK(c.value == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lp_norm(fn("t"), 1, Interval(-1, 1)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(fn("t"), 0.5, Interval(0, 1)), PreconditionError);

  const CertValue d2 = deriv_norm(fn("exp(-t^2)"), 2, 2, Interval(0, 0.125), 1e-14);
  CHECK(std::fabs(d2.value - 0.696212697333) <= 1e-9);
  CHECK_THROWS_AS(deriv_norm(fn("abs(t)"), 1, 2, Interval(-1, 1)), NotDifferentiableError);
}

TEST_CASE("Lp norm is monotone in p on a unit interval") {
  SmoothFamily family(9);
  for (int k = 0; k < 10; ++k) {
    const ScalarFunction f = family.next();
    const Interval iv(0, 1);
    const double n15 = lp_norm(f, 1.5, iv).value;
    const double n2 = lp_norm(f, 2, iv).value;
    const double n3 = lp_norm(f, 3, iv).value;
    CHECK(n15 <= n2 * (1 + 1e-9));
    CHECK(n2 <= n3 * (1 + 1e-9));
  }
}

TEST_CASE("positivity grid checks") {
  CHECK(positive_on(fn("exp(t)"), Interval(-1, 1)));
  CHECK_FALSE(positive_on(fn("t"), Interval(0, 1)));
  CHECK(nonnegative_on(fn("t"), Interval(0, 1)));
  CHECK_FALSE(nonnegative_on(fn("t - 0.5"), Interval(0, 1)));
  CHECK_FALSE(positive_on(fn("ln(t)"), Interval(-1, 1)));
}

TEST_CASE("certificate validation") {
  RegularityCertificate cert;
  cert.lipschitz = CertValue::exact(2.0);
  cert.deriv_norms[{2, 2.0}] = CertValue::exact(1.0);
  CHECK_NOTHROW(cert.validate());
  REQUIRE(cert.deriv_norm(2, 2.0) != nullptr);
  CHECK(cert.deriv_norm(1, 2.0) == nullptr);
  cert.holder = HolderCert{CertValue::exact(1.0), 1.5};
  CHECK_THROWS_AS(cert.validate(), PreconditionError);
  cert.holder.reset();
  cert.total_variation = CertValue::exact(-1.0);
  CHECK_THROWS_AS(cert.validate(), PreconditionError);
}
