#include "thermo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thermo/errors.hpp"
#include "thermo/expr.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

double Potential::operator()(double x) const {
    for (double s : singular_set)
        if (std::abs(x - s) <= tol().singularity_radius)
            throw SingularityError("potential '" + label + "' is singular at " +
                                   std::to_string(s));
    return eval_fn(x);
}

Potential make_constant(double c) {
    return Potential{[c](double) { return c; }, 1.0, "constant(" + std::to_string(c) + ")", {}};
}

Potential make_cosine(double amp, double freq) {
    return Potential{[amp, freq](double x) { return amp * std::cos(2.0 * std::numbers::pi * freq * x); },
                     1.0, "cosine(" + std::to_string(amp) + "," + std::to_string(freq) + ")", {}};
}

Potential make_geometric(const IntervalMap& map, double t, double holder_exponent) {
    return Potential{[map, t](double x) { return -t * std::log(std::abs(map.derivative(x))); },
                     holder_exponent, "geometric(" + map.label() + ",t=" + std::to_string(t) + ")",
                     map.critical_points()};
}

Potential make_distance_power(double C, double alpha, std::vector<double> points) {
    if (points.empty()) throw DomainError("distance_power needs at least one point");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("distance_power alpha must be in (0,1]");
    return Potential{[C, alpha, points](double x) {
                         double d = std::abs(x - points[0]);
                         for (double p : points) d = std::min(d, std::abs(x - p));
                         return -C * std::pow(d, alpha);
                     },
                     alpha, "distance_power", {}};
}

Potential make_expr_potential(const std::string& expr, double holder_exponent) {
    Expr e = Expr::parse(expr);
    return Potential{[e](double x) { return e.eval(x); }, holder_exponent, "expr(" + expr + ")", {}};
}

Potential combine_linear(const Potential& phi, double t, const Potential& psi) {
    std::vector<double> singular = phi.singular_set;
    singular.insert(singular.end(), psi.singular_set.begin(), psi.singular_set.end());
    auto phi_fn = phi.eval_fn;
    auto psi_fn = psi.eval_fn;
    return Potential{[phi_fn, t, psi_fn](double x) { return phi_fn(x) + t * psi_fn(x); },
                     std::min(phi.holder_exponent, psi.holder_exponent),
                     phi.label + "+" + std::to_string(t) + "*" + psi.label, std::move(singular)};
}

double birkhoff_sum(const IntervalMap& map, const Potential& phi, double x, int n) {
    if (n < 1) throw PreconditionError("birkhoff_sum needs n >= 1");
    double sum = 0.0;
    double y = x;
    for (int j = 0; j < n; ++j) {
        try {
            sum += phi(y);
        } catch (const SingularityError&) {
            throw SingularityError("orbit hits a singular point of '" + phi.label +
                                   "' at iterate " + std::to_string(j));
        }
        if (j + 1 < n) y = map.evaluate(y);
    }
    return sum;
}

CohomologyPair cohomology_reduce(const IntervalMap& map, const Potential& phi, int n) {
    if (n < 1) throw PreconditionError("cohomology_reduce needs n >= 1");
    Potential phi_tilde{
        [map, phi, n](double x) { return birkhoff_sum(map, phi, x, n) / n; },
        phi.holder_exponent, "avg_" + std::to_string(n) + "(" + phi.label + ")",
        phi.singular_set};
    Potential h{[map, phi, n](double x) {
                    double sum = 0.0;
                    double y = x;
                    for (int j = 0; j < n; ++j) {
                        sum += (n - 1 - j) * phi(y);
                        if (j + 1 < n) y = map.evaluate(y);
                    }
                    return -sum / n;
                },
                phi.holder_exponent, "transfer_" + std::to_string(n) + "(" + phi.label + ")",
                phi.singular_set};
    return CohomologyPair{std::move(phi_tilde), std::move(h)};
}

double holder_modulus(const Potential& phi, double lo, double hi, int grid_size,
                      double min_separation) {
    if (grid_size < 2) throw PreconditionError("holder_modulus needs grid_size >= 2");
    std::vector<double> xs, vals;
    xs.reserve(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        double x = lo + (hi - lo) * i / double(grid_size - 1);
        bool singular = false;
        for (double s : phi.singular_set)
            if (std::abs(x - s) <= 1e-9) singular = true;
        if (singular) continue;
        xs.push_back(x);
        vals.push_back(phi(x));
    }
    double best = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j) {
            double dx = xs[j] - xs[i];
            if (dx < min_separation) continue;
            double q = std::abs(vals[j] - vals[i]) / std::pow(dx, phi.holder_exponent);
            best = std::max(best, q);
        }
    return best;
}

} // namespace thermo
