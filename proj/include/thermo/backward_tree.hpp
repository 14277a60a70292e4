#pragma once

#include <cstddef>
#include <vector>

#include "thermo/interval_map.hpp"
#include "thermo/parallel.hpp"
#include "thermo/potential.hpp"
#include "thermo/pressure_estimate.hpp"

namespace thermo {

struct TreeLeaf {
    double point;
    double log_weight; // accumulated Birkhoff sum S_k(phi) along the forward path
};

// The full preimage set f^{-n}(x0) with per-leaf Birkhoff sums and the
// per-level partition values log Z_k, all kept in log space.
struct BackwardTree {
    double base = 0.0;
    int depth = 0;
    std::vector<TreeLeaf> leaves;          // deepest level, sorted by point
    std::vector<double> log_partition;     // log Z_k for k = 1..depth
    std::vector<std::size_t> level_counts; // node counts for k = 1..depth
};

inline constexpr std::size_t kDefaultNodeBudget = std::size_t(1) << 24;

// Breadth-first preimage expansion. Leaves are sorted and log-sum-exp runs in
// sorted order, so the result is independent of the execution policy and the
// worker count. Base points sitting exactly on a branch-cut image are nudged
// off by a fixed offset. Throws BudgetError when a level would exceed the
// node budget, SingularityError if phi is singular on the tree.
BackwardTree build_tree(const IntervalMap& map, const Potential& phi, double x0, int n,
                        Exec exec = Exec::Parallel, std::size_t node_budget = kDefaultNodeBudget);

// Headline number is the least-squares slope of log Z_k over the deepest half
// of the levels; (1/n) log Z_n and the full sequence ride along as diagnostics.
PressureEstimate tree_pressure(const BackwardTree& tree);

// Max over leaves of (1/n) S_n(phi), with an attaining leaf.
struct BackwardMax {
    double value;
    double witness;
};
BackwardMax max_backward_birkhoff(const BackwardTree& tree);

// Tree-pressure slope at an N-periodic base against (1/N) S_N(phi)(x0).
// The periodic-case lemma predicts gap > 0.
struct PeriodicGap {
    double lhs;
    double rhs;
    double gap;
};
PeriodicGap periodic_gap_check(const IntervalMap& map, const Potential& phi, double x0, int N,
                               int depth, Exec exec = Exec::Parallel);

// Least-squares slope of ys against xs (shared helper, also used by fits).
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// log(sum exp(v)) over values already in a deterministic order.
double log_sum_exp(const std::vector<double>& log_values);

} // namespace thermo
