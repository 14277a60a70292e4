#pragma once

#include <functional>

namespace thermo {

// Solves g(x) = target for a strictly monotone g on [lo, hi], assuming the
// target value is bracketed. Bisection to the configured bracket width,
// followed by a few Newton steps when the derivative is usable. Returns the
// refined root; never leaves [lo, hi].
double invert_monotone(const std::function<double(double)>& g,
                       const std::function<double(double)>& dg,
                       double lo, double hi, double target);

// Plain bisection for a continuous h with h(lo) and h(hi) of opposite sign
// (or zero). Stops at the configured bracket width.
double bisect(const std::function<double(double)>& h, double lo, double hi);

} // namespace thermo
