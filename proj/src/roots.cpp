#include "thermo/roots.hpp"

#include <algorithm>
#include <cmath>

#include "thermo/tolerances.hpp"

namespace thermo {

double bisect(const std::function<double(double)>& h, double lo, double hi) {
    double flo = h(lo);
    if (flo == 0.0) return lo;
    double fhi = h(hi);
    if (fhi == 0.0) return hi;
    // orient so that h(lo) < 0 < h(hi) logically
    bool rising = flo < 0.0;
    while (hi - lo > tol().root_bracket_width) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // ran out of floating-point resolution
        double fm = h(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double invert_monotone(const std::function<double(double)>& g,
                       const std::function<double(double)>& dg,
                       double lo, double hi, double target) {
    const double lo0 = lo, hi0 = hi;
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == target) return lo;
    if (ghi == target) return hi;
    bool increasing = glo < ghi;

    bool flat = false; // derivative too small anywhere probed: bisection only
    while (hi - lo > tol().root_bracket_width) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (std::abs(dg(mid)) < tol().flat_derivative) flat = true;
        double gm = g(mid);
        if (gm == target) return mid;
        if ((gm < target) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    if (!flat) {
        for (int i = 0; i < 3; ++i) {
            double d = dg(x);
            if (std::abs(d) < tol().flat_derivative) break;
            double step = (g(x) - target) / d;
            double xn = std::clamp(x - step, lo0, hi0);
            if (std::abs(g(xn) - target) < std::abs(g(x) - target)) x = xn;
            if (std::abs(g(x) - target) <= tol().root_residual) break;
        }
    }
    return x;
}

} // namespace thermo
