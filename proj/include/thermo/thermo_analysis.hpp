#pragma once

#include <string>
#include <vector>

#include "thermo/interval_map.hpp"
#include "thermo/parallel.hpp"
#include "thermo/potential.hpp"
#include "thermo/pressure_estimate.hpp"

namespace thermo {

// Decision threshold for hyperbolicity verdicts.
inline constexpr double kVerdictThreshold = 0.02;

struct PeriodicOrbitSup {
    double value = 0.0;
    std::vector<double> orbit;
};

// Max of (1/p) S_p(phi) over periodic orbits of period <= max_period, found as
// fixed points of composed inverse branches. Full-branch maps only.
PeriodicOrbitSup periodic_orbit_sup(const IntervalMap& map, const Potential& phi,
                                    int max_period);

struct HyperbolicityReport {
    double sup_birkhoff = 0.0;
    PressureEstimate pressure;      // headline: operator method
    PressureEstimate tree_estimate; // cross-check
    double margin = 0.0;            // pressure - sup_birkhoff
    std::string verdict;            // hyperbolic | not-hyperbolic | inconclusive
    int n_used = 0;
    int grid_used = 0;
    double witness_value = 0.0;
    std::vector<double> witness_orbit; // orbit attaining the sup (when one does)
};

// sup (1/n) S_n(phi) over a grid plus periodic orbits, against the pressure.
HyperbolicityReport hyperbolicity_check(const IntervalMap& map, const Potential& phi, int depth,
                                        int k_cells, int max_period, int grid,
                                        Exec exec = Exec::Parallel);

struct LyapunovBounds {
    double chi_inf = 0.0;
    double chi_sup = 0.0;
    double equilibrium_integral = 0.0; // int log|Df| d(MME approximation)
};

// Periodic-orbit extremes of the Lyapunov average; maps without critical points only.
LyapunovBounds lyapunov_bounds(const IntervalMap& map, int max_period, int k_cells,
                               Exec exec = Exec::Parallel);

struct PressureCurve {
    std::vector<double> t, P, dP, d2P;
};

struct Kink {
    double t;
    double left_slope;
    double right_slope;
};

// P(f, phi + t psi) on a parameter grid, by the operator method.
PressureCurve pressure_scan(const IntervalMap& map, const Potential& phi, const Potential& psi,
                            const std::vector<double>& t_grid, int k_cells,
                            Exec exec = Exec::Parallel, long max_iterations = 100000);

// Slope-break locations: one-sided secant fits over the 3 points strictly to
// each side differ by more than 0.1. Consecutive detections collapse to the
// sharpest one.
std::vector<Kink> kink_detect(const PressureCurve& curve);

} // namespace thermo
