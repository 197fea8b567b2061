#include "stieltjes/interval.hpp"

#include <cmath>
#include <sstream>

#include "stieltjes/errors.hpp"

namespace stieltjes {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw PreconditionError("interval endpoints must be finite");
  }
  if (!(a < b)) throw PreconditionError("interval requires a < b");
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '[' << a_ << ", " << b_ << ']';
  return os.str();
}

}  // namespace stieltjes
