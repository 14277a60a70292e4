#pragma once

#include <string>
#include <vector>

namespace thermo {

// A pressure value with its method tag and convergence diagnostics.
struct PressureEstimate {
    double value = 0.0;
    std::string method;  // "tree-slope" or "operator-eig"
    int resolution = 0;  // tree depth or operator cell count
    double residual = 0.0;
    std::vector<double> trace; // per-level log Z_k, or per-resolution values
};

} // namespace thermo
