#pragma once

namespace stieltjes {

// Error function. Maclaurin series for |x| <= 1, continued fraction for the
// complement elsewhere; relative accuracy near 1e-15 across the real line.
double erf(double x);
double erfc(double x);

}  // namespace stieltjes
