#include "stieltjes/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {
namespace {

std::string describe(const char* what, double a, double b) {
  std::ostringstream os;
  os.precision(6);
  os << what << " on [" << a << ", " << b << "]";
  return os.str();
}

void require_samples(int samples) {
  if (samples < 2) throw PreconditionError("grid needs at least 2 samples");
}

double grid_point(const Interval& iv, int i, int samples) {
  if (i == samples - 1) return iv.b();
  return iv.a() + iv.length() * static_cast<double>(i) / static_cast<double>(samples - 1);
}

}  // namespace

std::string_view to_string(Provenance p) {
  return p == Provenance::Exact ? "exact" : "estimated";
}

CertValue CertValue::exact(double value, std::string detail) {
  return CertValue{value, Provenance::Exact, std::move(detail)};
}

CertValue CertValue::estimated(double value, std::string detail) {
  return CertValue{value, Provenance::Estimated, std::move(detail)};
}

const CertValue* RegularityCertificate::deriv_norm(int n, double p) const {
  const auto it = deriv_norms.find({n, p});
  return it == deriv_norms.end() ? nullptr : &it->second;
}

void RegularityCertificate::validate() const {
  auto check = [](const CertValue& c, const char* name) {
    if (!std::isfinite(c.value) || c.value < 0.0) {
      throw PreconditionError(std::string(name) + " must be finite and >= 0");
    }
  };
  if (lipschitz) check(*lipschitz, "lipschitz");
  if (total_variation) check(*total_variation, "total_variation");
  if (holder) {
    check(holder->constant, "holder constant");
    if (!(holder->exponent > 0.0 && holder->exponent <= 1.0)) {
      throw PreconditionError("holder exponent must lie in (0, 1]");
    }
  }
  for (const auto& [key, value] : deriv_norms) {
    if (key.first < 1) throw PreconditionError("derivative order must be >= 1");
    if (!(key.second >= 1.0) || !std::isfinite(key.second)) {
      throw PreconditionError("norm exponent p must be >= 1");
    }
    check(value, "derivative norm");
  }
}

CertValue lp_norm(const ScalarFunction& w, double p, const Interval& iv, double tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw PreconditionError("lp_norm requires finite p >= 1");
  if (w.is_constant()) {
    const double c = std::fabs(w(iv.a()));
    return CertValue::exact(c * std::pow(iv.length(), 1.0 / p),
                            describe("L^p norm of a constant", iv.a(), iv.b()));
  }
  const OracleResult r = riemann_integral(
      RealFn([&](double t) { return std::pow(std::fabs(w(t)), p); }), iv, tol);
  if (!r.converged) {
    throw ConvergenceError("lp_norm: integral of |w|^p did not converge",
                           std::pow(r.value, 1.0 / p));
  }
  std::ostringstream detail;
  detail << "adaptive quadrature of |w|^" << p << ", integral error <= " << r.achieved_tolerance;
  return CertValue::estimated(std::pow(std::max(r.value, 0.0), 1.0 / p), detail.str());
}

CertValue deriv_norm(const ScalarFunction& f, int n, double p, const Interval& iv, double tol) {
  if (n < 1) throw PreconditionError("derivative order must be >= 1");
  CertValue c = lp_norm(f.derivative(n), p, iv, tol);
  c.detail = "norm of derivative " + std::to_string(n) + ": " + c.detail;
  return c;
}

VariationTrace total_variation_trace(const ScalarFunction& f, const Interval& iv, double tol,
                                     std::span<const double> breakpoints) {
  std::vector<double> seeds{iv.a()};
  for (double c : normalize_breakpoints(breakpoints, iv)) seeds.push_back(c);
  seeds.push_back(iv.b());

  // values[j] holds f on the current grid of segment j.
  std::vector<std::vector<double>> values;
  for (std::size_t j = 0; j + 1 < seeds.size(); ++j) {
    values.push_back({f(seeds[j]), f(seeds[j + 1])});
  }
  auto variation = [&] {
    double sum = 0.0;
    for (const auto& v : values) {
      for (std::size_t i = 0; i + 1 < v.size(); ++i) sum += std::fabs(v[i + 1] - v[i]);
    }
    return sum;
  };

  VariationTrace trace;
  double best = variation();
  trace.levels.push_back(best);
  for (int level = 1; level <= kTotalVariationMaxLevels; ++level) {
    for (std::size_t j = 0; j + 1 < seeds.size(); ++j) {
      const double lo = seeds[j], hi = seeds[j + 1];
      const std::vector<double>& old = values[j];
      const std::size_t panels = old.size() - 1;
      const double h = (hi - lo) / static_cast<double>(panels);
      std::vector<double> next;
      next.reserve(2 * panels + 1);
      for (std::size_t i = 0; i < panels; ++i) {
        next.push_back(old[i]);
        next.push_back(f(lo + (static_cast<double>(i) + 0.5) * h));
      }
      next.push_back(old.back());
      values[j] = std::move(next);
    }
    const double current = std::max(best, variation());
    const double change = current - best;
    best = current;
    trace.levels.push_back(best);
    if (level >= 3 && change <= tol * best) {
      trace.converged = true;
      break;
    }
  }
  std::ostringstream detail;
  detail << "variation sum over nested dyadic partitions (" << trace.levels.size() - 1
         << " levels); converges to the total variation from below";
  trace.estimate = CertValue::estimated(best, detail.str());
  return trace;
}

CertValue estimate_total_variation(const ScalarFunction& f, const Interval& iv, double tol,
                                   std::span<const double> breakpoints) {
  VariationTrace trace = total_variation_trace(f, iv, tol, breakpoints);
  if (!trace.converged) {
    throw ConvergenceError("total variation did not converge within the depth limit",
                           trace.estimate.value);
  }
  return trace.estimate;
}

double max_difference_quotient(const ScalarFunction& f, const Interval& iv, int samples) {
  require_samples(samples);
  const double h = iv.length() / static_cast<double>(samples - 1);
  double prev = f(iv.a());
  double best = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double cur = f(grid_point(iv, i, samples));
    best = std::max(best, std::fabs(cur - prev) / h);
    prev = cur;
  }
  return best;
}

CertValue estimate_lipschitz(const ScalarFunction& f, const Interval& iv, int samples) {
  require_samples(samples);
  const int refined = 2 * samples - 1;
  if (f.is_constant()) return CertValue::exact(0.0, "constant function");
  if (!f.differentiable()) {
    return CertValue::estimated(max_difference_quotient(f, iv, refined),
                                describe("max difference quotient, uniform grid", iv.a(), iv.b()));
  }
  const ScalarFunction df = f.derivative(1);
  double best = 0.0;
  for (int i = 0; i < refined; ++i) best = std::max(best, std::fabs(df(grid_point(iv, i, refined))));
  std::ostringstream detail;
  detail << "max |f'| over " << refined << " grid points on [" << iv.a() << ", " << iv.b() << "]";
  return CertValue::estimated(best, detail.str());
}

CertValue estimate_holder(const ScalarFunction& f, double r, const Interval& iv, int samples) {
  require_samples(samples);
  if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("holder exponent must lie in (0, 1]");
  std::vector<double> values(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) values[static_cast<std::size_t>(i)] = f(grid_point(iv, i, samples));
  const double h = iv.length() / static_cast<double>(samples - 1);
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 1; j < samples; ++j) {
      const double gap = static_cast<double>(j - i) * h;
      const double diff = std::fabs(values[static_cast<std::size_t>(j)] - values[static_cast<std::size_t>(i)]);
      best = std::max(best, diff / (r == 1.0 ? gap : std::pow(gap, r)));
    }
  }
  std::ostringstream detail;
  detail << "max pairwise Holder quotient, r = " << r << ", " << samples << " grid points";
  return CertValue::estimated(best, detail.str());
}

namespace {

// Points where f is undefined count as failures.
template <class Pred>
bool holds_on_grid(const ScalarFunction& f, const Interval& iv, int samples, Pred pred) {
  require_samples(samples);
  try {
    for (int i = 0; i < samples; ++i) {
      if (!pred(f(grid_point(iv, i, samples)))) return false;
    }
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

}  // namespace

bool positive_on(const ScalarFunction& f, const Interval& iv, int samples) {
  return holds_on_grid(f, iv, samples, [](double v) { return v > 0.0; });
}

bool nonnegative_on(const ScalarFunction& f, const Interval& iv, int samples) {
  return holds_on_grid(f, iv, samples, [](double v) { return v >= 0.0; });
}

}  // namespace stieltjes
