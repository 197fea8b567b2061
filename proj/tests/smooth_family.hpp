#pragma once

// Random smooth functions (no domain errors on bounded intervals) for the
// oracle and quadrature property tests.

#include <cstdio>
#include <random>
#include <string>

#include "stieltjes/expr.hpp"

namespace stieltjes::testing {

class SmoothFamily {
 public:
  explicit SmoothFamily(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }

  // c0 + c1 t + c2 t^2 + c3 sin(k t) + c4 exp(m t)
  std::string next_source() {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f + %.6f*t + %.6f*t^2 + %.6f*sin(%.6f*t) + %.6f*exp(%.6f*t)",
                  uniform(-2, 2), uniform(-2, 2), uniform(-1, 1), uniform(-1, 1), uniform(0.5, 3),
                  uniform(-1, 1), uniform(-1, 1));
    return buf;
  }
  ScalarFunction next() { return ScalarFunction::parse(next_source()); }

  Interval next_interval() {
    const double a = uniform(-1, 1);
    return Interval(a, a + uniform(0.05, 1.5));
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace stieltjes::testing
