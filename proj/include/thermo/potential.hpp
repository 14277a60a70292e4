#pragma once

#include <functional>
#include <string>
#include <vector>

#include "thermo/interval_map.hpp"

namespace thermo {

// A real-valued function on the ambient interval with a declared Hoelder
// exponent. Immutable, pure, shareable. The exponent is declared by the
// caller, never inferred.
struct Potential {
    std::function<double(double)> eval_fn;
    double holder_exponent = 1.0;
    std::string label;
    std::vector<double> singular_set;

    // Evaluates, throwing SingularityError within tolerance of a singular point.
    double operator()(double x) const;

    bool has_singularities() const { return !singular_set.empty(); }
};

Potential make_constant(double c);

// amp * cos(2 pi freq x)
Potential make_cosine(double amp, double freq);

// -t log |Df|; singular at the map's critical points. Exponent as declared.
Potential make_geometric(const IntervalMap& map, double t, double holder_exponent = 1.0);

// -C * dist(x, points)^alpha
Potential make_distance_power(double C, double alpha, std::vector<double> points);

// Expression-string potential in the Expr grammar; exponent declared by caller.
Potential make_expr_potential(const std::string& expr, double holder_exponent);

// phi + t * psi, exponent = min of the two.
Potential combine_linear(const Potential& phi, double t, const Potential& psi);

// S_n(phi)(x) = sum_{j<n} phi(f^j(x)); throws SingularityError naming the
// offending iterate if the orbit hits the singular set.
double birkhoff_sum(const IntervalMap& map, const Potential& phi, double x, int n);

// phi_tilde = (1/n) S_n(phi) and the transfer function h with
// phi_tilde = phi + h - h o f.
struct CohomologyPair {
    Potential phi_tilde;
    Potential h;
};
CohomologyPair cohomology_reduce(const IntervalMap& map, const Potential& phi, int n);

// Empirical Hoelder quotient max |phi(x)-phi(x')| / |x-x'|^alpha over grid
// pairs separated by at least min_separation, skipping singular neighborhoods.
double holder_modulus(const Potential& phi, double lo, double hi, int grid_size,
                      double min_separation = 1e-4);

} // namespace thermo
