#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stieltjes/bounds.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/quadrature.hpp"

using namespace stieltjes;

namespace {

ScalarFunction fn(const char* src) { return ScalarFunction::parse(src); }

CertValue exact(double v) { return CertValue::exact(v); }

const Interval kPaper(0, 0.125);
const double kPaperLip = 0.25 * std::exp(-1.0 / 64);
const double kPaperVar = 1 - std::exp(-1.0 / 64);
constexpr double kPaperD2Norm = 0.696212697333;

bool close(double x, double y, double rel) {
  return std::fabs(x - y) <= rel * std::max(std::fabs(x), std::fabs(y));
}

}  // namespace

TEST_CASE("bw_coefficient") {
  CHECK(bw_coefficient(2, 1) == doctest::Approx(2 / std::numbers::pi).epsilon(1e-15));
  CHECK(bw_coefficient(2, 2) == doctest::Approx(0.405284734569351).epsilon(1e-14));
  CHECK_THROWS_AS(bw_coefficient(1.0, 1), PreconditionError);
  CHECK_THROWS_AS(bw_coefficient(1.0001 - 0.0001, 2), PreconditionError);
  CHECK_THROWS_AS(bw_coefficient(2, 0), PreconditionError);
  // The base lies in (0, 1] and equals 1 only in the limit p -> 1.
  for (double p : {1.01, 1.5, 3.0, 10.0}) {
    CHECK(bw_coefficient(p, 1) > 0);
    CHECK(bw_coefficient(p, 1) < 1);
  }
}

TEST_CASE("lemma bounds") {
  const Interval unit(0, 1);
  const CertValue w = exact(1 / std::sqrt(3.0));
  CHECK(lemma1_bound(exact(1), 2, unit, w).bound_value ==
        doctest::Approx(0.5773502691896258).epsilon(1e-15));
  CHECK(lemma1_bound(exact(3), 1, Interval(0, 5), exact(0.7)).bound_value ==
        doctest::Approx(2.1).epsilon(1e-15));
  CHECK(lemma1_bound(exact(0), 2, unit, w).bound_value == 0.0);
  // Integral of t dt over [0, 1] is 0.5.
  CHECK(0.5 <= lemma1_bound(exact(1), 2, unit, w).bound_value);

  CHECK(lemma2_bound(exact(1), exact(1), 2, w).bound_value ==
        doctest::Approx(0.5773502691896258).epsilon(1e-15));
  CHECK(lemma2_bound(exact(2), exact(9), 1, exact(0.5)).bound_value == 1.0);
  CHECK(lemma2_bound(exact(2), exact(9), 2, exact(0)).bound_value == 0.0);
  CHECK_THROWS_AS(lemma1_bound(exact(1), 0.5, unit, w), PreconditionError);
}

TEST_CASE("safety factor applies to estimated certificates only") {
  const Interval unit(0, 1);
  const BoundReport plain = lemma1_bound(exact(2), 2, unit, exact(0.5));
  CHECK_FALSE(plain.inputs.safety_applied);
  const BoundReport inflated =
      lemma1_bound(CertValue::estimated(2, "grid"), 2, unit, exact(0.5), 1.2);
  CHECK(inflated.inputs.safety_applied);
  CHECK(inflated.inputs.safety_factor == 1.2);
  CHECK(inflated.bound_value == doctest::Approx(1.2 * plain.bound_value).epsilon(1e-15));
  REQUIRE(inflated.inputs.certificates.size() == 2);
  CHECK(inflated.inputs.certificates[0].supplied == 2.0);
  CHECK(inflated.inputs.certificates[0].used == doctest::Approx(2.4));
  CHECK_THROWS_AS(lemma1_bound(exact(2), 2, unit, exact(0.5), 0.9), PreconditionError);
  CHECK_THROWS_AS(lemma1_bound(exact(-1), 2, unit, exact(0.5)), PreconditionError);
}

TEST_CASE("thm1 special cases") {
  const Interval iv(0.5, 2.0);
  const double H = 1.3, lipf = 0.8, Vf = 0.6;
  // x = a, alpha = 1: only the (b - a)^{(rp+1)/p} term survives.
  for (double p : {1.0, 2.0, 3.0}) {
    const double r = 0.7, P = r * p + 1;
    const double expected = H * lipf * std::pow(Vf, 1 - 1 / p) * std::pow(1.5, P / p) / std::pow(P, 1 / p);
    CHECK(thm1_bound(exact(H), r, exact(lipf), exact(Vf), p, iv, 1.0, 0.5).bound_value ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  // p = 2, r = 1, alpha = 0, x = m.
  const double m = iv.midpoint();
  const double expected = H * lipf * std::sqrt(Vf) / std::sqrt(3.0) * 2 * std::pow(0.75, 1.5);
  CHECK(thm1_bound(exact(H), 1, exact(lipf), exact(Vf), 2, iv, 0.0, m).bound_value ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK(closed_form::thm1_p2_lipschitz(H, lipf, Vf, iv, 0.0, m) ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(thm1_bound(exact(H), 1, exact(lipf), exact(Vf), 2, iv, 0.0, 1.3),
                  PreconditionError);
  CHECK_THROWS_AS(thm1_bound(exact(H), 0, exact(lipf), exact(Vf), 2, iv, 0.0, 1.0),
                  PreconditionError);
}

TEST_CASE("thm1 printed specializations agree with the general formula") {
  std::mt19937_64 rng(31);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng); };
  for (int k = 0; k < 100; ++k) {
    const double a = uniform(-2, 2);
    const Interval iv(a, a + uniform(0.01, 3));
    const double x = a + uniform(0, 0.5) * iv.length();
    const double alpha = uniform(0, 1), H = uniform(0, 3), lipf = uniform(0, 3), Vf = uniform(0, 3);
    const double r = uniform(0.05, 1), p = uniform(1, 4);
    auto general = [&](double rr, double pp) {
      return thm1_bound(exact(H), rr, exact(lipf), exact(Vf), pp, iv, alpha, x).bound_value;
    };
    CHECK(close(general(r, 2), closed_form::thm1_p2(H, r, lipf, Vf, iv, alpha, x), 1e-13));
    CHECK(close(general(1, 2), closed_form::thm1_p2_lipschitz(H, lipf, Vf, iv, alpha, x), 1e-13));
    CHECK(close(general(1 / p, p), closed_form::thm1_r_inverse_p(H, lipf, Vf, p, iv, alpha, x), 1e-13));
  }
}

TEST_CASE("thm1 on the worked example") {
  const auto f = fn("exp(-t^2)"), u = fn("t");
  const BoundReport r = validate_bound(
      thm1_bound(exact(1), 1, exact(kPaperLip), exact(kPaperVar), 2, kPaper, 0.0, 1.0 / 32), f, u,
      kPaper, 0.0, 1.0 / 32, 1e-12);
  CHECK(r.bound_value == doctest::Approx(3.337e-4).epsilon(1e-3));
  CHECK(*r.valid_vs_oracle);
}

TEST_CASE("thm1 fails for a contraction: regression record") {
  // lip(f) < 1 makes lip(f) V(f)^{1/2} smaller than the true Holder-type
  // estimate lip(f)^{1/2} V(f)^{1/2}; the trapezoid end of the family exposes it.
  const auto f = fn("exp(-t^2)"), u = fn("t");
  const BoundReport r = validate_bound(
      thm1_bound(exact(1), 1, exact(kPaperLip), exact(kPaperVar), 2, kPaper, 1.0, 0.0), f, u,
      kPaper, 1.0, 0.0, 1e-12);
  CHECK(r.bound_value == doctest::Approx(7.8194158e-4).epsilon(1e-7));
  CHECK(std::fabs(*r.actual_error) == doctest::Approx(1.2899441e-3).epsilon(1e-7));
  CHECK_FALSE(*r.valid_vs_oracle);
}

TEST_CASE("thm2") {
  const Interval iv(0, 2);
  const double lipf = 1.5, Vf = 0.8, un = std::sqrt(2.0);
  for (double alpha : {0.0, 0.3, 1.0}) {
    for (int n : {1, 2, 3}) {
      CHECK(thm2_bound(exact(lipf), exact(Vf), exact(un), 2, n, iv, alpha, 1.0).bound_value ==
            doctest::Approx(closed_form::thm2_midpoint(lipf, Vf, un, 2, n, iv)).epsilon(1e-14));
    }
  }
  // u = t, n = 1, p = 2, x = a.
  const double expected = lipf * std::sqrt(Vf) * (2 / std::numbers::pi) *
                          (0.4 * (0.5 + 0.5) + 0.6 * (1 + 1)) * std::sqrt(2.0);
  CHECK(thm2_bound(exact(lipf), exact(Vf), exact(un), 2, 1, iv, 0.6, 0.0).bound_value ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(thm2_bound(exact(0), exact(Vf), exact(un), 2, 1, iv, 0.6, 0.0).bound_value == 0.0);
  CHECK_THROWS_AS(thm2_bound(exact(lipf), exact(Vf), exact(un), 1, 1, iv, 0.6, 0.0),
                  PreconditionError);

  // Bracket terms grow with distance from their centres.
  double previous = -1;
  for (double x : {0.5, 0.4, 0.2, 0.0}) {
    const double v = thm2_bound(exact(1), exact(1), exact(1), 2, 2, iv, 0.0, x).bound_value;
    CHECK(v >= previous);
    previous = v;
  }
  previous = -1;
  for (double x : {1.0, 0.7, 0.3, 0.0}) {
    const double v = thm2_bound(exact(1), exact(1), exact(1), 2, 2, iv, 1.0, x).bound_value;
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("thm3 on the worked example") {
  const BoundReport r = thm3_bound(exact(1), exact(kPaperD2Norm), 2, 2, kPaper, 1.0 / 32);
  CHECK(r.bound_value == doctest::Approx(1.37775575313699e-4).epsilon(1e-10));
  const double prefactor = thm3_bound(exact(1), exact(1), 2, 2, kPaper, 1.0 / 32).bound_value;
  CHECK(prefactor == doctest::Approx(1.97892936801e-4).epsilon(1e-10));

  const BoundReport v =
      validate_bound(r, fn("exp(-t^2)"), fn("t"), kPaper, 0.0, 1.0 / 32, 1e-12);
  CHECK(*v.valid_vs_oracle);
  CHECK(std::fabs(*v.actual_error - 4.00864e-5) <= 1e-10);
  CHECK_THROWS_AS(validate_bound(r, fn("exp(-t^2)"), fn("t"), kPaper, 0.5, 1.0 / 32),
                  PreconditionError);
  CHECK(thm3_bound(exact(0), exact(kPaperD2Norm), 2, 2, kPaper, 0.0).bound_value == 0.0);
}

TEST_CASE("closed-form identities") {
  std::mt19937_64 rng(17);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng); };
  for (int k = 0; k < 100; ++k) {
    const double a = uniform(-1, 1);
    const Interval iv(a, a + uniform(0.01, 2));
    const double p = uniform(1.05, 5), lipu = uniform(0, 3), norm = uniform(0, 3);
    const int n = 1 + k % 4;
    const double quarter = (3 * iv.a() + iv.b()) / 4;
    CHECK(close(thm3_bound(exact(lipu), exact(norm), p, n, iv, quarter).bound_value,
                closed_form::thm3_quarter_node(lipu, norm, p, n, iv), 1e-13));
    CHECK(close(thm4_bound(exact(lipu), exact(norm), p, n, iv, iv.midpoint()).bound_value,
                closed_form::thm4_midpoint(lipu, norm, p, n, iv), 1e-13));
    CHECK(close(simpson_bound(exact(lipu), exact(norm), p, n, iv).bound_value,
                closed_form::thm4_midpoint(lipu, norm, p, n, iv), 1e-13));
  }
  for (int n = 1; n <= 6; ++n) {
    double factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    const Interval iv(0, 1 / (std::pow(2.0, n) * factorial));
    CHECK(close(closed_form::thm3_quarter_node(1, 0.37, 2, n, iv),
                closed_form::thm3_factorial_interval(0.37, n), 1e-13));
  }
}

TEST_CASE("thm4") {
  // u = t, f = t^2 on [0, 1], n = 1, p = 2, x = 1/2.
  const Interval unit(0, 1);
  const BoundReport r = thm4_bound(exact(1), exact(2 / std::sqrt(3.0)), 2, 1, unit, 0.5);
  CHECK(r.bound_value == doctest::Approx(0.5198).epsilon(1e-4));
  const BoundReport v = validate_bound(r, fn("t^2"), fn("t"), unit, 1.0, 0.5);
  CHECK(std::fabs(*v.actual_error) == doctest::Approx(1.0 / 6).epsilon(1e-9));
  CHECK(*v.valid_vs_oracle);

  // Largest at the endpoints, nondecreasing in |x - m|.
  const double at_end = thm4_bound(exact(1), exact(1), 3, 2, unit, 0.0).bound_value;
  CHECK(thm4_bound(exact(1), exact(1), 3, 2, unit, 1.0).bound_value == doctest::Approx(at_end));
  CHECK(at_end == doctest::Approx(2 * bw_coefficient(3, 2)).epsilon(1e-14));
  double previous = -1;
  for (double d : {0.0, 0.1, 0.2, 0.35, 0.5}) {
    const double v = thm4_bound(exact(1), exact(1), 3, 2, unit, 0.5 + d).bound_value;
    CHECK(v >= previous);
    CHECK(thm4_bound(exact(1), exact(1), 3, 2, unit, 0.5 - d).bound_value == doctest::Approx(v));
    previous = v;
  }
  CHECK_THROWS_AS(thm4_bound(exact(1), exact(1), 2, 1, unit, 1.1), PreconditionError);
  CHECK_THROWS_AS(thm4_bound(exact(1), exact(1), 0.9, 1, unit, 0.5), PreconditionError);
}

TEST_CASE("simpson-combined") {
  const Interval unit(0, 1);
  const auto f = fn("t^3"), u = fn("t");
  // ||3 t^2||_2 = 3 / sqrt(5).
  const BoundReport r = simpson_bound(exact(1), exact(3 / std::sqrt(5.0)), 2, 1, unit);
  const BoundReport v = validate_bound(r, f, u, unit, 1.0 / 3, 0.5);
  CHECK(*v.valid_vs_oracle);
  CHECK(simpson_bound(exact(0), exact(1), 2, 1, unit).bound_value == 0.0);

  const double e0 = *error_term(f, u, unit, 0.0, 0.5).actual_error;
  const double e1 = *error_term(f, u, unit, 1.0, 0.5).actual_error;
  const double e13 = *error_term(f, u, unit, 1.0 / 3, 0.5).actual_error;
  CHECK(std::fabs(e13 - (2 * e0 + e1) / 3) <= 1e-10);
}

TEST_CASE("homogeneity in f at the actual degrees") {
  // Bounds linear in f-derivative norms scale by c; those built on
  // lip(f) V(f)^{1 - 1/p} scale by c^{2 - 1/p}.
  const Interval iv(0, 1);
  for (double c : {0.25, 3.0}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const double lin = thm3_bound(exact(1.2), exact(c * 0.4), p, 2, iv, 0.1).bound_value /
                         thm3_bound(exact(1.2), exact(0.4), p, 2, iv, 0.1).bound_value;
      CHECK(lin == doctest::Approx(c).epsilon(1e-13));
      CHECK(thm4_bound(exact(1), exact(c), p, 1, iv, 0.9).bound_value ==
            doctest::Approx(c * thm4_bound(exact(1), exact(1), p, 1, iv, 0.9).bound_value).epsilon(1e-13));
      CHECK(lemma1_bound(exact(c * 2), p, iv, exact(0.3)).bound_value ==
            doctest::Approx(c * lemma1_bound(exact(2), p, iv, exact(0.3)).bound_value).epsilon(1e-13));
      const double degree = 2 - 1 / p;
      CHECK(thm1_bound(exact(1), 0.5, exact(c * 2), exact(c * 0.7), p, iv, 0.4, 0.2).bound_value ==
            doctest::Approx(std::pow(c, degree) *
                            thm1_bound(exact(1), 0.5, exact(2), exact(0.7), p, iv, 0.4, 0.2).bound_value)
                .epsilon(1e-13));
      CHECK(thm2_bound(exact(c * 2), exact(c * 0.7), exact(1), p, 1, iv, 0.4, 0.2).bound_value ==
            doctest::Approx(std::pow(c, degree) *
                            thm2_bound(exact(2), exact(0.7), exact(1), p, 1, iv, 0.4, 0.2).bound_value)
                .epsilon(1e-13));
    }
  }
  // The oracle error itself is linear in f.
  const auto u = fn("t^2");
  const double e1 = *error_term(fn("sin(t)"), u, iv, 0.5, 0.3).actual_error;
  const double e3 = *error_term(fn("3*sin(t)"), u, iv, 0.5, 0.3).actual_error;
  CHECK(e3 == doctest::Approx(3 * e1).epsilon(1e-8));
}

TEST_CASE("kernel form of lemma 1 holds") {
  // |E| = |integral of S_u df| <= lip(f) (b - a)^{1 - 1/p} ||S_u||_p.
  struct Case {
    const char *f, *u, *lip;
    double a, b;
  };
  const Case cases[] = {{"exp(-t^2)", "t", "0.25*exp(-1/64)", 0, 0.125},
                        {"t^3", "t^2", "3", 0, 1},
                        {"sin(t)", "exp(t)", "1", 0, 0.5}};
  for (const Case& c : cases) {
    const Interval iv(c.a, c.b);
    const auto f = fn(c.f), u = fn(c.u);
    const double lip = fn(c.lip)(0);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      for (double alpha : {0.0, 1.0 / 3, 0.5, 1.0}) {
        for (double theta : {0.0, 0.2, 0.5}) {
          const double x = std::min(c.a + theta * iv.length(), iv.midpoint());
          const CertValue w = exact(kernel_lp_norm(u, iv, alpha, x, p, 1e-12));
          const BoundReport r =
              validate_bound(with_rule(lemma1_bound(exact(lip), p, iv, w), alpha, x), f, u, iv,
                             alpha, x, 1e-11);
          CHECK(*r.valid_vs_oracle);
        }
      }
    }
  }
}

TEST_CASE("n = 1 derivative-norm bounds hold on positive data") {
  struct Case {
    const char *f, *u;
    double lipu, a, b;
  };
  const Case cases[] = {{"t^2", "t", 1, 0.1, 1},      {"t^3", "t^2", 2, 0.2, 1},
                        {"exp(t)", "t^2", 1, 0, 0.5}, {"t^2", "t^2", 2, 0.5, 1},
                        {"t^3", "t^3", 3, 0.5, 1},    {"exp(t)", "t+t^2", 1.5, 0, 0.25}};
  for (const Case& c : cases) {
    const Interval iv(c.a, c.b);
    const auto f = fn(c.f), u = fn(c.u);
    CHECK(hypothesis_warnings(TheoremId::Thm3, f, u, iv, 1).empty());
    for (double p : {1.5, 2.0, 3.0}) {
      const CertValue norm = exact(deriv_norm(f, 1, p, iv, 1e-13).value);
      for (double theta : {0.0, 0.25, 0.5}) {
        const double x = std::min(c.a + theta * iv.length(), iv.midpoint());
        CHECK(*validate_bound(thm3_bound(exact(c.lipu), norm, p, 1, iv, x), f, u, iv, 0.0, x)
                   .valid_vs_oracle);
        CHECK(*validate_bound(thm4_bound(exact(c.lipu), norm, p, 1, iv, x), f, u, iv, 1.0, x)
                   .valid_vs_oracle);
      }
      CHECK(*validate_bound(simpson_bound(exact(c.lipu), norm, p, 1, iv), f, u, iv, 1.0 / 3,
                            iv.midpoint())
                 .valid_vs_oracle);
    }
  }
}

TEST_CASE("hypothesis warnings") {
  const Interval unit(0, 1);
  CHECK(hypothesis_warnings(TheoremId::Thm1, fn("t"), fn("t - 0.5"), unit, 1) ==
        std::vector<std::string>{"u-negative"});
  CHECK(hypothesis_warnings(TheoremId::Thm2, fn("t"), fn("t"), unit, 2) ==
        std::vector<std::string>{"u-not-positive", "u-deriv2-not-positive"});
  CHECK(hypothesis_warnings(TheoremId::Thm4, fn("abs(t - 2)"), fn("t"), unit, 1) ==
        std::vector<std::string>{"f-not-differentiable"});
  CHECK(hypothesis_warnings(TheoremId::Lemma1, fn("t"), fn("-t"), unit, 1).empty());
}

TEST_CASE("a corrupted certificate can be caught") {
  const auto f = fn("exp(-t^2)"), u = fn("t");
  const BoundReport r = validate_bound(
      thm3_bound(exact(1), exact(kPaperD2Norm / 8), 2, 2, kPaper, 1.0 / 32), f, u, kPaper, 0.0,
      1.0 / 32);
  CHECK_FALSE(*r.valid_vs_oracle);
  CHECK_FALSE(r.inputs.safety_applied);
}

TEST_CASE("theorem ids") {
  for (const char* name : {"lemma1", "lemma2", "thm1", "thm2", "thm3", "thm4", "simpson-combined"}) {
    CHECK(to_string(parse_theorem_id(name)) == name);
  }
  CHECK_THROWS_AS(parse_theorem_id("thm5"), PreconditionError);
}
