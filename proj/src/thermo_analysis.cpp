#include "thermo/thermo_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "thermo/backward_tree.hpp"
#include "thermo/errors.hpp"
#include "thermo/tolerances.hpp"
#include "thermo/transfer_operator.hpp"

namespace thermo {

namespace {

bool is_full_branch(const IntervalMap& map) {
    for (const Branch& br : map.branches()) {
        if (std::abs(br.image_lo() - map.ambient_lo()) > tol().endpoint_match) return false;
        if (std::abs(br.image_hi() - map.ambient_hi()) > tol().endpoint_match) return false;
    }
    return true;
}

// lexicographically least among cyclic rotations, and primitive
bool is_canonical_word(const std::vector<int>& w) {
    const size_t p = w.size();
    for (size_t p0 = 1; p0 < p; ++p0) {
        if (p % p0 != 0) continue;
        bool repeats = true;
        for (size_t i = p0; i < p && repeats; ++i)
            if (w[i] != w[i % p0]) repeats = false;
        if (repeats) return false; // power of a shorter word
    }
    std::vector<int> rot(w);
    for (size_t r = 1; r < p; ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < w) return false;
    }
    return true;
}

// Fixed point of the composed inverse branches: solves g(x) = x where
// g = inv_{w0} o inv_{w1} o ... o inv_{w_{p-1}}.
double periodic_point_of_word(const IntervalMap& map, const std::vector<int>& w) {
    auto g = [&](double x) {
        double z = x;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            double y = map.branch_preimage(*it, z);
            if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
            z = y;
        }
        return z;
    };
    double lo = map.ambient_lo(), hi = map.ambient_hi();
    double flo = g(lo) - lo, fhi = g(hi) - hi;
    if (std::isnan(flo) || std::isnan(fhi)) return std::numeric_limits<double>::quiet_NaN();
    if (flo <= 0.0) return lo; // g contracts into the word cell; endpoint fixed point
    if (fhi >= 0.0) return hi;
    while (hi - lo > tol().root_bracket_width) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = g(mid) - mid;
        if (fm == 0.0) return mid;
        if (fm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

PeriodicOrbitSup periodic_orbit_sup(const IntervalMap& map, const Potential& phi,
                                    int max_period) {
    if (max_period < 1) throw PreconditionError("max_period must be >= 1");
    if (!is_full_branch(map))
        throw UnsupportedError("periodic_orbit_sup requires a full-branch map");

    const int d = int(map.branches().size());
    PeriodicOrbitSup best;
    bool have_best = false;

    for (int p = 1; p <= max_period; ++p) {
        std::vector<int> w(p, 0);
        for (;;) {
            if (is_canonical_word(w)) {
                double x = periodic_point_of_word(map, w);
                if (!std::isnan(x)) {
                    // orbit along the itinerary: x_{j+1} = branch w_j applied to x_j
                    std::vector<double> orbit{x};
                    bool ok = true;
                    double sum = 0.0;
                    double y = x;
                    for (int j = 0; j < p; ++j) {
                        const Branch& br = map.branches()[w[j]];
                        if (y < br.domain_lo - tol().endpoint_match ||
                            y > br.domain_hi + tol().endpoint_match) {
                            ok = false;
                            break;
                        }
                        try {
                            sum += phi(std::clamp(y, br.domain_lo, br.domain_hi));
                        } catch (const SingularityError&) {
                            ok = false;
                            break;
                        }
                        y = br.forward(std::clamp(y, br.domain_lo, br.domain_hi));
                        if (j + 1 < p) orbit.push_back(y);
                    }
                    if (ok && std::abs(y - x) <= 1e-8) {
                        double avg = sum / p;
                        if (!have_best || avg > best.value) {
                            best.value = avg;
                            best.orbit = orbit;
                            have_best = true;
                        }
                    }
                }
            }
            // next word in the alphabet {0..d-1}^p
            int j = p - 1;
            while (j >= 0 && w[j] == d - 1) w[j--] = 0;
            if (j < 0) break;
            ++w[j];
        }
    }
    if (!have_best) throw InfeasibleError("no periodic orbit found up to the requested period");
    return best;
}

HyperbolicityReport hyperbolicity_check(const IntervalMap& map, const Potential& phi, int depth,
                                        int k_cells, int max_period, int grid, Exec exec) {
    if (depth < 1 || grid < 2) throw PreconditionError("hyperbolicity_check needs depth >= 1, grid >= 2");

    HyperbolicityReport report;
    report.n_used = depth;
    report.grid_used = grid;

    double grid_sup = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        double x = map.ambient_lo() +
                   (map.ambient_hi() - map.ambient_lo()) * (i + 0.5) / double(grid);
        try {
            grid_sup = std::max(grid_sup, birkhoff_sum(map, phi, x, depth) / depth);
        } catch (const SingularityError&) {
            // orbits through singular points carry no information about the sup
        }
    }
    PeriodicOrbitSup orbit_sup = periodic_orbit_sup(map, phi, max_period);
    report.sup_birkhoff = std::max(grid_sup, orbit_sup.value);
    report.witness_value = orbit_sup.value;
    report.witness_orbit = orbit_sup.orbit;

    report.pressure = pressure_operator(map, phi, k_cells, exec);
    double base = map.ambient_lo() + 0.5 * (map.ambient_hi() - map.ambient_lo());
    report.tree_estimate = tree_pressure(build_tree(map, phi, base, depth, exec));

    report.margin = report.pressure.value - report.sup_birkhoff;

    bool methods_agree = std::abs(report.pressure.value - report.tree_estimate.value) <= 0.05;
    bool witness_attains = orbit_sup.value >= report.sup_birkhoff - kVerdictThreshold;
    if (!methods_agree)
        report.verdict = "inconclusive";
    else if (report.margin > kVerdictThreshold)
        report.verdict = "hyperbolic";
    else if (report.margin < kVerdictThreshold && witness_attains)
        report.verdict = "not-hyperbolic";
    else
        report.verdict = "inconclusive";
    return report;
}

LyapunovBounds lyapunov_bounds(const IntervalMap& map, int max_period, int k_cells, Exec exec) {
    if (map.has_interior_critical_points())
        throw UnsupportedError("lyapunov_bounds requires a map without critical points");
    Potential log_df{[map](double x) { return std::log(std::abs(map.derivative(x))); }, 1.0,
                     "log|Df|", {}};

    // reuse the periodic-orbit machinery with both signs to get min and max
    PeriodicOrbitSup hi = periodic_orbit_sup(map, log_df, max_period);
    Potential neg{[map](double x) { return -std::log(std::abs(map.derivative(x))); }, 1.0,
                  "-log|Df|", {}};
    PeriodicOrbitSup lo = periodic_orbit_sup(map, neg, max_period);

    CollocationOperator op = build_operator(map, make_constant(0.0), k_cells, exec);
    EigenData eig = leading_eigen(op);
    std::vector<double> w = equilibrium_measure(op, eig);
    double integral = 0.0;
    for (int i = 0; i < op.cells(); ++i) integral += w[i] * log_df(op.nodes()[i]);

    return LyapunovBounds{-lo.value, hi.value, integral};
}

PressureCurve pressure_scan(const IntervalMap& map, const Potential& phi, const Potential& psi,
                            const std::vector<double>& t_grid, int k_cells, Exec exec,
                            long max_iterations) {
    if (t_grid.size() < 5) throw PreconditionError("pressure_scan needs >= 5 grid points");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw PreconditionError("t_grid must be sorted");

    PressureCurve curve;
    curve.t = t_grid;
    curve.P.resize(t_grid.size());
    std::exception_ptr error;
    #pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(t_grid.size()); ++i) {
        try {
            Potential combined = combine_linear(phi, t_grid[i], psi);
            curve.P[i] =
                pressure_operator(map, combined, k_cells, Exec::Serial, max_iterations).value;
        } catch (...) {
            #pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    const size_t n = t_grid.size();
    curve.dP.resize(n);
    curve.d2P.resize(n);
    for (size_t i = 0; i < n; ++i) {
        size_t a = i == 0 ? 0 : i - 1;
        size_t b = i + 1 == n ? i : i + 1;
        curve.dP[i] = (curve.P[b] - curve.P[a]) / (curve.t[b] - curve.t[a]);
    }
    for (size_t i = 0; i < n; ++i) {
        if (i == 0 || i + 1 == n) {
            curve.d2P[i] = 0.0;
            continue;
        }
        double hl = curve.t[i] - curve.t[i - 1];
        double hr = curve.t[i + 1] - curve.t[i];
        curve.d2P[i] = 2.0 * (hl * curve.P[i + 1] - (hl + hr) * curve.P[i] + hr * curve.P[i - 1]) /
                       (hl * hr * (hl + hr));
    }
    return curve;
}

std::vector<Kink> kink_detect(const PressureCurve& curve) {
    const size_t n = curve.t.size();
    if (n < 7) throw PreconditionError("kink_detect needs >= 7 points");

    auto slope = [&](size_t from, size_t to) {
        std::vector<double> xs(curve.t.begin() + from, curve.t.begin() + to + 1);
        std::vector<double> ys(curve.P.begin() + from, curve.P.begin() + to + 1);
        return least_squares_slope(xs, ys);
    };

    std::vector<Kink> raw;
    for (size_t i = 3; i + 3 < n; ++i) {
        double left = slope(i - 3, i - 1);
        double right = slope(i + 1, i + 3);
        if (std::abs(left - right) > 0.1) raw.push_back(Kink{curve.t[i], left, right});
    }
    // a genuine kink triggers at several adjacent grid points; keep the sharpest
    std::vector<Kink> out;
    size_t i = 0;
    while (i < raw.size()) {
        size_t j = i;
        size_t best = i;
        auto sharpness = [](const Kink& k) { return std::abs(k.left_slope - k.right_slope); };
        while (j + 1 < raw.size() &&
               raw[j + 1].t - raw[j].t < 2.5 * (curve.t[1] - curve.t[0])) {
            ++j;
            if (sharpness(raw[j]) > sharpness(raw[best])) best = j;
        }
        out.push_back(raw[best]);
        i = j + 1;
    }
    return out;
}

} // namespace thermo
