#include "stieltjes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stieltjes/errors.hpp"

namespace stieltjes {
namespace {

constexpr int kMaxSimpsonDepth = 50;
constexpr std::size_t kMaxSimpsonEvaluations = 20'000'000;

// Kahan-Babuska (Neumaier) compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class AdaptiveSimpson {
 public:
  explicit AdaptiveSimpson(const RealFn& w) : w_(w) {}

  OracleResult run(const Interval& iv, double tol) {
    const double a = iv.a(), b = iv.b(), m = iv.midpoint();
    const double fa = eval(a), fm = eval(m), fb = eval(b);
    const double whole = simpson(a, b, fa, fm, fb);
    panel(a, b, fa, fm, fb, whole, tol, 0);
    OracleResult r;
    r.value = total_.value();
    r.achieved_tolerance = error_;
    r.evaluations = evaluations_;
    r.converged = converged_ && error_ <= tol;
    return r;
  }

 private:
  double eval(double t) {
    ++evaluations_;
    return w_(t);
  }

  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  void panel(double a, double b, double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    // Below this the difference is rounding noise, not discretization error.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         (b - a) * (std::fabs(fa) + 4 * std::fabs(fm) + std::fabs(fb)) / 6.0;
    const bool accurate = std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= noise;
    const bool exhausted = depth >= kMaxSimpsonDepth || evaluations_ >= kMaxSimpsonEvaluations ||
                           !(a < lm && lm < m && m < rm && rm < b);
    if (accurate || exhausted) {
      if (!accurate) converged_ = false;
      total_.add(left + right + delta / 15.0);
      error_ += std::fabs(delta) / 15.0;
      return;
    }
    panel(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
    panel(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  const RealFn& w_;
  CompensatedSum total_;
  double error_ = 0.0;
  std::size_t evaluations_ = 0;
  bool converged_ = true;
};

void require_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw PreconditionError("tolerance must be positive");
}

}  // namespace

OracleResult riemann_integral(const RealFn& w, const Interval& iv, double tol) {
  require_tol(tol);
  return AdaptiveSimpson(w).run(iv, tol);
}

OracleResult riemann_integral(const ScalarFunction& w, const Interval& iv, double tol) {
  return riemann_integral(RealFn([&w](double t) { return w(t); }), iv, tol);
}

std::vector<double> normalize_breakpoints(std::span<const double> breakpoints,
                                          const Interval& iv) {
  std::vector<double> out;
  for (double c : breakpoints) {
    if (!iv.contains(c)) {
      throw PreconditionError("breakpoint outside the integration interval");
    }
    if (c > iv.a() && c < iv.b()) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OracleResult stieltjes_sums(const RealFn& f, const RealFn& u, const Interval& iv, double tol,
                            const StieltjesOptions& options) {
  require_tol(tol);
  const std::vector<double> cuts = normalize_breakpoints(options.breakpoints, iv);
  const double eps = 1e-12 * iv.length();

  std::size_t evaluations = 0;
  auto fe = [&](double t) {
    ++evaluations;
    return f(t);
  };
  auto ue = [&](double t) {
    ++evaluations;
    return u(t);
  };

  struct Segment {
    double lo, hi;
    std::vector<double> u_nodes;  // u at the level's grid, one-sided at cuts
  };
  std::vector<double> seeds{iv.a()};
  seeds.insert(seeds.end(), cuts.begin(), cuts.end());
  seeds.push_back(iv.b());

  std::vector<Segment> segments;
  for (std::size_t j = 0; j + 1 < seeds.size(); ++j) {
    Segment s{seeds[j], seeds[j + 1], {}};
    const bool cut_left = j > 0;
    const bool cut_right = j + 2 < seeds.size();
    s.u_nodes = {ue(cut_left ? s.lo + eps : s.lo), ue(cut_right ? s.hi - eps : s.hi)};
    segments.push_back(std::move(s));
  }

  CompensatedSum jumps;
  for (double c : cuts) jumps.add(fe(c) * (ue(c + eps) - ue(c - eps)));

  auto level_sum = [&]() {
    CompensatedSum sum;
    sum.add(jumps.value());
    for (const Segment& s : segments) {
      const std::size_t panels = s.u_nodes.size() - 1;
      const double h = (s.hi - s.lo) / static_cast<double>(panels);
      for (std::size_t i = 0; i < panels; ++i) {
        const double tag = s.lo + (static_cast<double>(i) + 0.5) * h;
        sum.add(fe(tag) * (s.u_nodes[i + 1] - s.u_nodes[i]));
      }
    }
    return sum.value();
  };

  auto refine = [&]() {
    for (Segment& s : segments) {
      const std::size_t panels = s.u_nodes.size() - 1;
      const double h = (s.hi - s.lo) / static_cast<double>(panels);
      std::vector<double> next;
      next.reserve(2 * panels + 1);
      for (std::size_t i = 0; i < panels; ++i) {
        next.push_back(s.u_nodes[i]);
        next.push_back(ue(s.lo + (static_cast<double>(i) + 0.5) * h));
      }
      next.push_back(s.u_nodes.back());
      s.u_nodes = std::move(next);
    }
  };

  constexpr int kMinLevels = 3;
  OracleResult r;
  double previous = level_sum();
  for (int level = 1; level <= options.max_levels; ++level) {
    refine();
    const double current = level_sum();
    const double diff = std::fabs(current - previous);
    r.value = current;
    r.achieved_tolerance = diff;
    if (level >= kMinLevels && diff < tol) {
      r.converged = true;
      break;
    }
    previous = current;
  }
  r.evaluations = evaluations;
  return r;
}

OracleResult rs_integral(const RealFn& f, const RealFn& u, const Interval& iv, double tol,
                         std::span<const double> breakpoints) {
  StieltjesOptions options;
  options.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  return stieltjes_sums(f, u, iv, tol, options);
}

OracleResult rs_integral(const ScalarFunction& f, const ScalarFunction& u, const Interval& iv,
                         double tol, std::span<const double> breakpoints) {
  const RealFn fn = [&f](double t) { return f(t); };
  const RealFn un = [&u](double t) { return u(t); };
  const bool smooth = u.differentiable() && normalize_breakpoints(breakpoints, iv).empty();
  if (!smooth) return rs_integral(fn, un, iv, tol, breakpoints);

  if (u.is_constant()) {
    OracleResult r;
    r.converged = true;
    return r;
  }
  const ScalarFunction du = u.derivative(1);
  OracleResult direct = riemann_integral(RealFn([&](double t) { return f(t) * du(t); }), iv, tol);
  const OracleResult sums = rs_integral(fn, un, iv, tol);
  direct.evaluations += sums.evaluations;
  const double agreement = std::fabs(direct.value - sums.value);
  direct.converged = direct.converged && sums.converged && agreement <= 10.0 * tol;
  return direct;
}

double interval_mean(const ScalarFunction& g, const Interval& iv, double tol) {
  const OracleResult r = riemann_integral(g, iv, tol * iv.length());
  if (!r.converged) {
    throw ConvergenceError("interval_mean: integral did not converge", r.value / iv.length());
  }
  return r.value / iv.length();
}

}  // namespace stieltjes
