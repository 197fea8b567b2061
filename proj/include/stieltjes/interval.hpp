#pragma once

#include <stdexcept>
#include <string>

namespace stieltjes {

// Closed integration domain [a, b] with a < b, both finite.
class Interval {
 public:
  Interval(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  double midpoint() const { return 0.5 * (a_ + b_); }
  bool contains(double t) const { return t >= a_ && t <= b_; }

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

}  // namespace stieltjes
