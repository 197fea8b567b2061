#pragma once

// Regularity certificates: the constants the error bounds consume, either
// declared by the user (exact) or estimated numerically.
//
// Grid estimates are suprema over finite grids and so are biased low. The
// bounds module inflates estimated values by a safety factor.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "stieltjes/expr.hpp"
#include "stieltjes/interval.hpp"
#include "stieltjes/oracle.hpp"

namespace stieltjes {

enum class Provenance { Exact, Estimated };

std::string_view to_string(Provenance p);

struct CertValue {
  double value = 0.0;
  Provenance provenance = Provenance::Exact;
  std::string detail;

  static CertValue exact(double value, std::string detail = "user supplied");
  static CertValue estimated(double value, std::string detail);
};

struct HolderCert {
  CertValue constant;
  double exponent = 1.0;  // r in (0, 1]
};

struct RegularityCertificate {
  std::optional<CertValue> lipschitz;
  std::optional<HolderCert> holder;
  std::optional<CertValue> total_variation;
  // Keyed by (derivative order n, exponent p).
  std::map<std::pair<int, double>, CertValue> deriv_norms;

  const CertValue* deriv_norm(int n, double p) const;
  // Throws PreconditionError on negative/non-finite values or r outside (0, 1].
  void validate() const;
};

inline constexpr int kDefaultLipschitzSamples = 2048;
inline constexpr int kDefaultHolderSamples = 512;
inline constexpr int kTotalVariationMaxLevels = 20;

CertValue lp_norm(const ScalarFunction& w, double p, const Interval& iv,
                  double tol = kDefaultOracleTol);

CertValue deriv_norm(const ScalarFunction& f, int n, double p, const Interval& iv,
                     double tol = kDefaultOracleTol);

// Variation sums over nested dyadic partitions seeded with the breakpoints,
// refined until the relative change drops below tol. The reported sequence
// is a running maximum, so it never decreases under refinement.
struct VariationTrace {
  CertValue estimate;
  std::vector<double> levels;  // estimate after each refinement level
  bool converged = false;
};
VariationTrace total_variation_trace(const ScalarFunction& f, const Interval& iv, double tol,
                                     std::span<const double> breakpoints = {});
CertValue estimate_total_variation(const ScalarFunction& f, const Interval& iv,
                                   double tol = 1e-10, std::span<const double> breakpoints = {});

// max |f'| on a uniform grid of `samples` points refined once; falls back to
// max_difference_quotient on the refined grid when f contains abs.
CertValue estimate_lipschitz(const ScalarFunction& f, const Interval& iv,
                             int samples = kDefaultLipschitzSamples);

// max |f(t_{i+1}) - f(t_i)| / h over adjacent points of a uniform grid.
double max_difference_quotient(const ScalarFunction& f, const Interval& iv, int samples);

// max over all grid pairs y != z of |f(y) - f(z)| / |y - z|^r.
CertValue estimate_holder(const ScalarFunction& f, double r, const Interval& iv,
                          int samples = kDefaultHolderSamples);

// Grid check used for the "positive" hypotheses of the derivative-norm
// bounds: f(t) > 0 at every point of a uniform grid over [a, b].
bool positive_on(const ScalarFunction& f, const Interval& iv, int samples = 257);
bool nonnegative_on(const ScalarFunction& f, const Interval& iv, int samples = 257);

}  // namespace stieltjes
