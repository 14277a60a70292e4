#pragma once

#include <ostream>
#include <string>

#include "thermo/config.hpp"

namespace thermo {

// Exit codes: 0 success, 2 precondition / domain / config error,
// 3 budget or convergence error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitBudget = 3;

// Dispatches the config to the module operations and writes the result to the
// configured path (atomically, temp file + rename) or to `out` when no path is
// set. Errors become machine-readable JSON on `err` plus a non-zero exit code.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// %.17g rendering used for every float in CSV and JSON output.
std::string format_double(double v);

} // namespace thermo
