#pragma once

// A-priori L^p bounds on |E_alpha(f, u; x)|, the error of phi_alpha, built from
// regularity certificates. Every bound is returned as a BoundReport that
// records the inputs actually used, so a failed validity check can be traced
// back to a certificate.
//
// Conventions: t^0 = 1 and 0^s = 0 for s > 0; q = p / (p - 1).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stieltjes/funcspace.hpp"
#include "stieltjes/interval.hpp"
#include "stieltjes/oracle.hpp"

namespace stieltjes {

enum class TheoremId { Lemma1, Lemma2, Thm1, Thm2, Thm3, Thm4, SimpsonCombined };

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view name);  // throws PreconditionError

inline constexpr double kDefaultSafetyFactor = 1.05;

// A certificate as consumed by a bound: estimated values are multiplied by
// the safety factor, exact ones are used as given.
struct CertUse {
  std::string name;
  double supplied = 0.0;
  double used = 0.0;
  Provenance provenance = Provenance::Exact;
};

struct BoundInputs {
  // Rule and norm parameters in a fixed order; absent entries are omitted.
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<CertUse> certificates;
  double safety_factor = kDefaultSafetyFactor;
  bool safety_applied = false;
};

struct BoundReport {
  TheoremId theorem = TheoremId::Lemma1;
  double bound_value = 0.0;
  BoundInputs inputs;
  std::vector<std::string> warnings;
  std::optional<double> actual_error;
  std::optional<bool> valid_vs_oracle;
  bool oracle_converged = true;
};

// (p sin(pi/p) / (pi (p - 1)^{1/p}))^n. Requires p > 1 and n >= 1.
double bw_coefficient(double p, int n);

// L (b - a)^{1 - 1/p} ||w||_p for the integral of w dnu with nu L-Lipschitz.
BoundReport lemma1_bound(const CertValue& L, double p, const Interval& iv, const CertValue& w_norm,
                         double safety = kDefaultSafetyFactor);

// lip(nu) V(nu)^{1 - 1/p} ||w||_p.
BoundReport lemma2_bound(const CertValue& lip, const CertValue& V, double p, const CertValue& w_norm,
                         double safety = kDefaultSafetyFactor);

// u r-Holder with constant H, f Lipschitz with total variation Vf; x in [a, m].
BoundReport thm1_bound(const CertValue& H, double r, const CertValue& lipf, const CertValue& Vf,
                       double p, const Interval& iv, double alpha, double x,
                       double safety = kDefaultSafetyFactor);

// f Lipschitz with total variation Vf, u^{(n)} in L^p; x in [a, m].
BoundReport thm2_bound(const CertValue& lipf, const CertValue& Vf, const CertValue& u_deriv_norm,
                       double p, int n, const Interval& iv, double alpha, double x,
                       double safety = kDefaultSafetyFactor);

// alpha = 0 rule; u Lipschitz, f^{(n)} in L^p; x in [a, m].
BoundReport thm3_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                       const Interval& iv, double x, double safety = kDefaultSafetyFactor);

// alpha = 1 rule; u Lipschitz, f^{(n)} in L^p; x in [a, b].
BoundReport thm4_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                       const Interval& iv, double x, double safety = kDefaultSafetyFactor);

// alpha = 1/3, x = m, via E_{1/3} = (2/3) E_0 + (1/3) E_1.
BoundReport simpson_bound(const CertValue& lipu, const CertValue& f_deriv_norm, double p, int n,
                          const Interval& iv, double safety = kDefaultSafetyFactor);

// Closed-form specializations, taking plain numbers. They exist to be checked
// against the general bounds.
namespace closed_form {
// thm3 at x = (3a + b) / 4.
double thm3_quarter_node(double lipu, double f_deriv_norm, double p, int n, const Interval& iv);
// thm4 at x = m; also the Simpson-type bound.
double thm4_midpoint(double lipu, double f_deriv_norm, double p, int n, const Interval& iv);
// thm3_quarter_node with p = 2 on an interval of length 1 / (2^n n!).
double thm3_factorial_interval(double f_deriv_norm, int n);
// thm1 at p = 2.
double thm1_p2(double H, double r, double lipf, double Vf, const Interval& iv, double alpha, double x);
// thm1 at p = 2, r = 1.
double thm1_p2_lipschitz(double H, double lipf, double Vf, const Interval& iv, double alpha, double x);
// thm1 at r = 1/p.
double thm1_r_inverse_p(double H, double lipf, double Vf, double p, const Interval& iv, double alpha,
                        double x);
// thm2 at x = m.
double thm2_midpoint(double lipf, double Vf, double u_deriv_norm, double p, int n, const Interval& iv);
}  // namespace closed_form

// The rule a bound refers to, when the report pins it down: thm3 fixes
// alpha = 0, thm4 alpha = 1, simpson alpha = 1/3 and x = m; thm1, thm2 and
// lemmas built with rule parameters record them.
struct RuleParameters {
  double alpha;
  double x;
};
std::optional<RuleParameters> rule_parameters(const BoundReport& report);

// Records alpha and x in a lemma report so it can be validated later.
BoundReport with_rule(BoundReport report, double alpha, double x);

// Fills actual_error = E_alpha(f, u; x) from the oracle and
// valid_vs_oracle = |error| <= bound + tol. Throws PreconditionError when the
// report carries different rule parameters.
BoundReport validate_bound(BoundReport report, const ScalarFunction& f, const ScalarFunction& u,
                           const Interval& iv, double alpha, double x,
                           double tol = kDefaultOracleTol,
                           std::span<const double> breakpoints = {});

// Grid checks of the qualitative hypotheses (positivity of f, u and their
// derivatives, nonnegativity of u). Each unmet hypothesis yields a warning
// code; the bound itself is still computed.
std::vector<std::string> hypothesis_warnings(TheoremId id, const ScalarFunction& f,
                                             const ScalarFunction& u, const Interval& iv, int n);

}  // namespace stieltjes
