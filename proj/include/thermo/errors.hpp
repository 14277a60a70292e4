#pragma once

#include <stdexcept>
#include <string>

namespace thermo {

// Argument outside an operation's documented domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A declared precondition does not hold (periodicity, grid size, ...).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested too close to a singular point of a potential.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A node / component budget was exhausted; carries the deepest completed level.
struct BudgetError : std::runtime_error {
    int deepest_completed_level;
    BudgetError(const std::string& what, int level)
        : std::runtime_error(what), deepest_completed_level(level) {}
};

// Iterative solver failed to reach its residual target.
struct ConvergenceError : std::runtime_error {
    double residual;
    ConvergenceError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

// Operation not available for this map class (documented limitation).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No admissible construction exists (IMFS search came up empty, root search infeasible).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace thermo
