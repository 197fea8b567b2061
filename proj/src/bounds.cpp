#include "stieltjes/bounds.hpp"

#include <cmath>
#include <numbers>

#include "stieltjes/errors.hpp"
#include "stieltjes/quadrature.hpp"

namespace stieltjes {
namespace {

// base^e with base^0 = 1 and 0^e = 0 for e > 0.
double powc(double base, double e) {
  if (e == 0.0) return 1.0;
  if (base == 0.0 && e > 0.0) return 0.0;
  return std::pow(base, e);
}

void require_p(double p, double min_exclusive_or_eq, bool strict) {
  const bool ok = std::isfinite(p) && (strict ? p > min_exclusive_or_eq : p >= min_exclusive_or_eq);
  if (!ok) throw PreconditionError(strict ? "p must be finite and > 1" : "p must be finite and >= 1");
}

void require_n(int n) {
  if (n < 1) throw PreconditionError("derivative order n must be >= 1");
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in [0, 1]");
}

void require_x(const Interval& iv, double x, bool full) {
  const double hi = full ? iv.b() : iv.midpoint();
  if (!(x >= iv.a() && x <= hi)) {
    throw PreconditionError(full ? "node x must lie in [a, b]" : "node x must lie in [a, (a+b)/2]");
  }
}

double q_of(double p) { return p / (p - 1.0); }

class ReportBuilder {
 public:
  ReportBuilder(TheoremId id, double safety) {
    if (!(safety >= 1.0) || !std::isfinite(safety)) {
      throw PreconditionError("safety factor must be finite and >= 1");
    }
    report_.theorem = id;
    report_.inputs.safety_factor = safety;
  }

  ReportBuilder& param(const char* name, double value) {
    report_.inputs.parameters.emplace_back(name, value);
    return *this;
  }

  ReportBuilder& interval(const Interval& iv) { return param("a", iv.a()).param("b", iv.b()); }

  double cert(const char* name, const CertValue& c) {
    if (!std::isfinite(c.value) || c.value < 0.0) {
      throw PreconditionError(std::string("certificate ") + name + " must be finite and >= 0");
    }
    CertUse use{name, c.value, c.value, c.provenance};
    if (c.provenance == Provenance::Estimated) {
      use.used = c.value * report_.inputs.safety_factor;
      report_.inputs.safety_applied = true;
    }
    report_.inputs.certificates.push_back(use);
    return use.used;
  }

  BoundReport finish(double value) {
    report_.bound_value = value;
    return std::move(report_);
  }

 private:
  BoundReport report_;
};

const double* find_param(const BoundReport& r, std::string_view name) {
  for (const auto& [key, value] : r.inputs.parameters) {
    if (key == name) return &value;
  }
  return nullptr;
}

// Bracketed node factor of thm1 for general p and r.
double thm1_bracket(double r, double p, const Interval& iv, double alpha, double x) {
  const double a = iv.a(), b = iv.b(), m = iv.midpoint();
  const double P = r * p + 1.0;
  const double root = powc(P, 1.0 / p);
  const double e = P / p;
  const double midpoint_part =
      2.0 * powc(x - a, e) / root + powc(2.0, 1.0 / p) * powc(m - x, e) / root;
  const double radicand = (powc(b - x, P) - powc(a + b - 2.0 * x, P)) / P;
  const double trapezoid_part =
      powc(x - a, e) / root + powc(a + b - 2.0 * x, e) / root + powc(std::max(radicand, 0.0), 1.0 / p);
  return (1.0 - alpha) * midpoint_part + alpha * trapezoid_part;
}

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Lemma1: return "lemma1";
    case TheoremId::Lemma2: return "lemma2";
    case TheoremId::Thm1: return "thm1";
    case TheoremId::Thm2: return "thm2";
    case TheoremId::Thm3: return "thm3";
    case TheoremId::Thm4: return "thm4";
    case TheoremId::SimpsonCombined: return "simpson-combined";
  }
  return "?";
}

TheoremId parse_theorem_id(std::string_view name) {
  for (TheoremId id : {TheoremId::Lemma1, TheoremId::Lemma2, TheoremId::Thm1, TheoremId::Thm2,
                       TheoremId::Thm3, TheoremId::Thm4, TheoremId::SimpsonCombined}) {
    if (to_string(id) == name) return id;
  }
  throw PreconditionError("unknown theorem id '" + std::string(name) + "'");
}

double bw_coefficient(double p, int n) {
  require_p(p, 1.0, true);
  require_n(n);
  const double base = p * std::sin(std::numbers::pi / p) /
                      (std::numbers::pi * std::pow(p - 1.0, 1.0 / p));
  return std::pow(base, n);
}

BoundReport lemma1_bound(const CertValue& L, double p, const Interval& iv, const CertValue& w_norm,
                         double safety) {
  require_p(p, 1.0, false);
  ReportBuilder rb(TheoremId::Lemma1, safety);
  rb.param("p", p).interval(iv);
  const double l = rb.cert("lipschitz", L);
  const double w = rb.cert("w_norm", w_norm);
  return rb.finish(l * powc(iv.length(), 1.0 - 1.0 / p) * w);
}

BoundReport lemma2_bound(const CertValue& lip, const CertValue& V, double p, const CertValue& w_norm,
                         double safety) {
  require_p(p, 1.0, false);
  ReportBuilder rb(TheoremId::Lemma2, safety);
  rb.param("p", p);
  const double l = rb.cert("lipschitz", lip);
  const double v = rb.cert("total_variation", V);
  const double w = rb.cert("w_norm", w_norm);
  return rb.finish(l * powc(v, 1.0 - 1.0 / p) * w);
}

BoundReport thm1_bound(const CertValue& H, double r, const CertValue& lipf, const CertValue& Vf,
                       double p, const Interval& iv, double alpha, double x, double safety) {
  require_p(p, 1.0, false);
  require_alpha(alpha);
  require_x(iv, x, false);
  if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("holder exponent r must lie in (0, 1]");
  ReportBuilder rb(TheoremId::Thm1, safety);
  rb.param("p", p).param("r", r).param("alpha", alpha).param("x", x).interval(iv);
  const double h = rb.cert("holder_u", H);
  const double lf = rb.cert("lipschitz_f", lipf);
  const double vf = rb.cert("total_variation_f", Vf);
  return rb.finish(h * lf * powc(vf, 1.0 - 1.0 / p) * thm1_bracket(r, p, iv, alpha, x));
}

BoundReport thm2_bound(const CertValue& lipf, const CertValue& Vf, const CertValue& u_deriv_norm,
                       double p, int n, const Interval& iv, double alpha, double x, double safety) {
  const double bw = bw_coefficient(p, n);
  require_alpha(alpha);
  require_x(iv, x, false);
  ReportBuilder rb(TheoremId::Thm2, safety);
  rb.param("p", p).param("q", q_of(p)).param("n", n).param("alpha", alpha).param("x", x).interval(iv);
  const double lf = rb.cert("lipschitz_f", lipf);
  const double vf = rb.cert("total_variation_f", Vf);
  const double un = rb.cert("deriv_norm_u", u_deriv_norm);
  const double a = iv.a(), b = iv.b();
  const double bracket =
      (1.0 - alpha) * std::pow((b - a) / 4.0 + std::fabs(x - (3.0 * a + b) / 4.0), n) +
      alpha * std::pow((b - a) / 2.0 + std::fabs(x - iv.midpoint()), n);
  return rb.finish(lf * powc(vf, 1.0 - 1.0 / p) * bw * bracket * un);
}

BoundReport thm3_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                       const Interval& iv, double x, double safety) {
  const double bw = bw_coefficient(p, n);
  require_x(iv, x, false);
  const double q = q_of(p);
  ReportBuilder rb(TheoremId::Thm3, safety);
  rb.param("p", p).param("q", q).param("n", n).param("alpha", 0.0).param("x", x).interval(iv);
  const double lu = rb.cert("lipschitz_u", lipu);
  const double fn = rb.cert("deriv_norm_f", f_deriv_norm);
  const double a = iv.a(), b = iv.b();
  const double bracket = std::pow((b - a) / 4.0 + std::fabs(x - (3.0 * a + b) / 4.0), n);
  return rb.finish(2.0 * lu * std::pow((b - a) / 2.0, 1.0 / q) * bw * bracket * fn);
}

BoundReport thm4_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                       const Interval& iv, double x, double safety) {
  const double bw = bw_coefficient(p, n);
  require_x(iv, x, true);
  const double q = q_of(p);
  ReportBuilder rb(TheoremId::Thm4, safety);
  rb.param("p", p).param("q", q).param("n", n).param("alpha", 1.0).param("x", x).interval(iv);
  const double lu = rb.cert("lipschitz_u", lipu);
  const double fn = rb.cert("deriv_norm_f", f_deriv_norm);
  const double span = iv.length() / 2.0 + std::fabs(x - iv.midpoint());
  return rb.finish(2.0 * lu * bw * std::pow(span, n + 1.0 / q) * fn);
}

BoundReport simpson_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                          const Interval& iv, double safety) {
  const double bw = bw_coefficient(p, n);
  const double q = q_of(p);
  ReportBuilder rb(TheoremId::SimpsonCombined, safety);
  rb.param("p", p).param("q", q).param("n", n).param("alpha", 1.0 / 3.0).param("x", iv.midpoint())
      .interval(iv);
  const double lu = rb.cert("lipschitz_u", lipu);
  const double fn = rb.cert("deriv_norm_f", f_deriv_norm);
  const double e = n + 1.0 / q;
  return rb.finish(lu * std::pow(iv.length(), e) / std::pow(2.0, e - 1.0) * bw * fn);
}

namespace closed_form {

double thm3_quarter_node(double lipu, double f_deriv_norm, double p, int n, const Interval& iv) {
  const double q = q_of(p);
  return lipu * bw_coefficient(p, n) * std::pow(iv.length(), n + 1.0 / q) /
         std::pow(2.0, 2.0 * n + 1.0 / q - 1.0) * f_deriv_norm;
}

double thm4_midpoint(double lipu, double f_deriv_norm, double p, int n, const Interval& iv) {
  const double q = q_of(p);
  return lipu * bw_coefficient(p, n) * std::pow(iv.length(), n + 1.0 / q) /
         std::pow(2.0, n + 1.0 / q - 1.0) * f_deriv_norm;
}

double thm3_factorial_interval(double f_deriv_norm, int n) {
  require_n(n);
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const double len = 1.0 / (std::pow(2.0, n) * factorial);
  return std::sqrt(2.0) / std::pow(2.0 * std::numbers::pi, n) * std::pow(len, n + 0.5) * f_deriv_norm;
}

double thm1_p2(double H, double r, double lipf, double Vf, const Interval& iv, double alpha, double x) {
  const double a = iv.a(), b = iv.b(), m = iv.midpoint();
  const double P = 2.0 * r + 1.0;
  const double s = std::sqrt(P);
  const double midpoint_part = 2.0 * powc(x - a, P / 2) / s + std::sqrt(2.0) * powc(m - x, P / 2) / s;
  const double trapezoid_part = powc(x - a, P / 2) / s + powc(a + b - 2 * x, P / 2) / s +
                                std::sqrt((powc(b - x, P) - powc(a + b - 2 * x, P)) / P);
  return H * lipf * std::sqrt(Vf) * ((1 - alpha) * midpoint_part + alpha * trapezoid_part);
}

double thm1_p2_lipschitz(double H, double lipf, double Vf, const Interval& iv, double alpha, double x) {
  const double a = iv.a(), b = iv.b(), m = iv.midpoint();
  const double midpoint_part = 2.0 * powc(x - a, 1.5) + std::sqrt(2.0) * powc(m - x, 1.5);
  const double trapezoid_part = powc(x - a, 1.5) + powc(a + b - 2 * x, 1.5) +
                                std::sqrt(powc(b - x, 3) - powc(a + b - 2 * x, 3));
  return H * lipf * std::sqrt(Vf) / std::sqrt(3.0) *
         ((1 - alpha) * midpoint_part + alpha * trapezoid_part);
}

double thm1_r_inverse_p(double H, double lipf, double Vf, double p, const Interval& iv, double alpha,
                        double x) {
  const double a = iv.a(), b = iv.b(), m = iv.midpoint();
  const double k = 1.0 / p;
  const double midpoint_part = 2.0 * powc(x - a, 2 * k) + powc(2.0, k) * powc(m - x, 2 * k);
  const double trapezoid_part = powc(x - a, 2 * k) + powc(a + b - 2 * x, 2 * k) +
                                powc(powc(b - x, 2) - powc(a + b - 2 * x, 2), k);
  return H / powc(2.0, k) * lipf * powc(Vf, 1 - k) *
         ((1 - alpha) * midpoint_part + alpha * trapezoid_part);
}

double thm2_midpoint(double lipf, double Vf, double u_deriv_norm, double p, int n, const Interval& iv) {
  return lipf * bw_coefficient(p, n) * std::pow(iv.length() / 2.0, n) * powc(Vf, 1.0 - 1.0 / p) *
         u_deriv_norm;
}

}  // namespace closed_form

std::optional<RuleParameters> rule_parameters(const BoundReport& report) {
  const double* alpha = find_param(report, "alpha");
  const double* x = find_param(report, "x");
  if (!alpha || !x) return std::nullopt;
  return RuleParameters{*alpha, *x};
}

BoundReport with_rule(BoundReport report, double alpha, double x) {
  if (rule_parameters(report)) throw PreconditionError("report already carries rule parameters");
  report.inputs.parameters.emplace_back("alpha", alpha);
  report.inputs.parameters.emplace_back("x", x);
  return report;
}

BoundReport validate_bound(BoundReport report, const ScalarFunction& f, const ScalarFunction& u,
                           const Interval& iv, double alpha, double x, double tol,
                           std::span<const double> breakpoints) {
  if (const auto rule = rule_parameters(report)) {
    if (rule->alpha != alpha || rule->x != x) {
      throw PreconditionError("rule parameters differ from those the bound was built for");
    }
  }
  const QuadratureResult r = error_term(f, u, iv, alpha, x, tol, breakpoints);
  report.actual_error = r.actual_error;
  report.oracle_converged = r.oracle_converged;
  report.valid_vs_oracle = std::fabs(*r.actual_error) <= report.bound_value + tol;
  if (!r.oracle_converged) report.warnings.emplace_back("oracle-not-converged");
  return report;
}

namespace {

// h > 0 and h^{(n)} > 0 on the grid; one warning per failed condition.
void check_positive_class(const ScalarFunction& h, const char* name, const Interval& iv, int n,
                          std::vector<std::string>& out) {
  if (!positive_on(h, iv)) out.push_back(std::string(name) + "-not-positive");
  if (!h.differentiable()) {
    out.push_back(std::string(name) + "-not-differentiable");
    return;
  }
  if (!positive_on(h.derivative(n), iv)) {
    out.push_back(std::string(name) + "-deriv" + std::to_string(n) + "-not-positive");
  }
}

}  // namespace

std::vector<std::string> hypothesis_warnings(TheoremId id, const ScalarFunction& f,
                                             const ScalarFunction& u, const Interval& iv, int n) {
  std::vector<std::string> out;
  switch (id) {
    case TheoremId::Thm1:
      if (!nonnegative_on(u, iv)) out.emplace_back("u-negative");
      break;
    case TheoremId::Thm2:
      check_positive_class(u, "u", iv, n, out);
      break;
    case TheoremId::Thm3:
    case TheoremId::Thm4:
    case TheoremId::SimpsonCombined:
      check_positive_class(f, "f", iv, n, out);
      break;
    default:
      break;
  }
  return out;
}

}  // namespace stieltjes
