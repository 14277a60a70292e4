#pragma once

namespace thermo {

// All numeric tolerances used across the library live here.
struct Tolerances {
    double root_bracket_width = 1e-13;   // bisection stops below this width
    double root_residual = 1e-12;        // |f(x) - y| target for branch inverses
    double flat_derivative = 1e-8;       // below this, skip derivative refinement
    double preimage_merge = 1e-10;       // duplicate preimages closer than this coalesce
    double branch_gap = 1e-12;           // adjacent branch endpoints must agree to this
    double self_map_slack = 1e-12;       // branch images may exceed the ambient by this
    double singularity_radius = 1e-12;   // potentials are undefined this close to a singular point
    double endpoint_match = 1e-8;        // surjectivity / forward re-verification slack
    double periodic_point = 1e-9;        // |f^N(x0) - x0| for declared periodic points
    double freeness_identify = 1e-9;     // composed inverse points closer than this are identified
    double eigen_residual = 1e-9;        // power-iteration convergence target
    double base_point_nudge = 1e-9;      // shift off exact branch-cut preimages
};

inline const Tolerances& tol() {
    static const Tolerances t{};
    return t;
}

} // namespace thermo
