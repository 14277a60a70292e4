#include "thermo/backward_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "thermo/errors.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

int worker_count() { return omp_get_max_threads(); }

double log_sum_exp(const std::vector<double>& log_values) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : log_values) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : log_values) s += std::exp(v - m);
    return m + std::log(s);
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = double(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Base points that are exact images of an interior branch cut get shifted off
// the cut's forward orbit before expansion.
double nudge_off_cut_images(const IntervalMap& map, double x0) {
    const auto& branches = map.branches();
    for (size_t b = 0; b + 1 < branches.size(); ++b) {
        double cut = branches[b].domain_hi;
        double left_val = branches[b].forward(cut);
        double right_val = branches[b + 1].forward(branches[b + 1].domain_lo);
        if (std::abs(left_val - x0) <= tol().branch_gap ||
            std::abs(right_val - x0) <= tol().branch_gap) {
            double nudged = x0 + tol().base_point_nudge;
            if (nudged > map.ambient_hi()) nudged = x0 - tol().base_point_nudge;
            return nudged;
        }
    }
    return x0;
}

void expand_level(const IntervalMap& map, const Potential& phi,
                  const std::vector<TreeLeaf>& level, std::vector<TreeLeaf>& next, Exec exec) {
    next.clear();
    if (exec == Exec::Serial) {
        for (const TreeLeaf& node : level)
            for (double y : map.preimages(node.point))
                next.push_back(TreeLeaf{y, phi(y) + node.log_weight});
    } else {
        std::vector<std::vector<TreeLeaf>> chunks;
        bool singular = false; // exceptions cannot cross the parallel region
        #pragma omp parallel
        {
            #pragma omp single
            chunks.resize(omp_get_num_threads());
            std::vector<TreeLeaf>& local = chunks[omp_get_thread_num()];
            #pragma omp for schedule(static)
            for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(level.size()); ++i) {
                const TreeLeaf& node = level[i];
                try {
                    for (double y : map.preimages(node.point))
                        local.push_back(TreeLeaf{y, phi(y) + node.log_weight});
                } catch (const SingularityError&) {
                    #pragma omp critical
                    singular = true;
                }
            }
        }
        if (singular) throw SingularityError("potential singular on the backward tree");
        for (const auto& chunk : chunks) next.insert(next.end(), chunk.begin(), chunk.end());
    }
    std::sort(next.begin(), next.end(),
              [](const TreeLeaf& a, const TreeLeaf& b) { return a.point < b.point; });
}

} // namespace

BackwardTree build_tree(const IntervalMap& map, const Potential& phi, double x0, int n,
                        Exec exec, std::size_t node_budget) {
    if (n < 1) throw PreconditionError("build_tree needs depth n >= 1");
    if (phi.has_singularities() && map.has_interior_critical_points())
        throw PreconditionError(
            "singular potentials are not allowed over maps with critical points");

    BackwardTree tree;
    tree.base = nudge_off_cut_images(map, x0);
    tree.depth = n;

    std::vector<TreeLeaf> level{TreeLeaf{tree.base, 0.0}};
    std::vector<TreeLeaf> next;
    std::vector<double> weights;
    for (int k = 1; k <= n; ++k) {
        // worst case: every node has a preimage in every branch
        if (level.size() * map.branches().size() > node_budget)
            throw BudgetError("backward tree node budget exceeded", k - 1);
        expand_level(map, phi, level, next, exec);
        level.swap(next);
        weights.clear();
        weights.reserve(level.size());
        for (const TreeLeaf& leaf : level) weights.push_back(leaf.log_weight);
        tree.log_partition.push_back(log_sum_exp(weights));
        tree.level_counts.push_back(level.size());
    }
    tree.leaves = std::move(level);
    return tree;
}

PressureEstimate tree_pressure(const BackwardTree& tree) {
    if (tree.depth < 4) throw PreconditionError("tree_pressure needs depth >= 4");
    const int n = tree.depth;
    std::vector<double> ks, zs;
    for (int k = n / 2 + 1; k <= n; ++k) {
        ks.push_back(double(k));
        zs.push_back(tree.log_partition[k - 1]);
    }
    PressureEstimate est;
    est.value = least_squares_slope(ks, zs);
    est.method = "tree-slope";
    est.resolution = n;
    est.residual = std::abs(tree.log_partition[n - 1] / n - est.value);
    est.trace = tree.log_partition;
    return est;
}

BackwardMax max_backward_birkhoff(const BackwardTree& tree) {
    if (tree.leaves.empty()) throw PreconditionError("tree has no leaves");
    const TreeLeaf* best = &tree.leaves.front();
    for (const TreeLeaf& leaf : tree.leaves)
        if (leaf.log_weight > best->log_weight) best = &leaf;
    return BackwardMax{best->log_weight / tree.depth, best->point};
}

PeriodicGap periodic_gap_check(const IntervalMap& map, const Potential& phi, double x0, int N,
                               int depth, Exec exec) {
    if (N < 1) throw PreconditionError("period N must be >= 1");
    double fN = map.iterate(x0, N).back();
    if (std::abs(fN - x0) > tol().periodic_point)
        throw PreconditionError("x0 is not N-periodic: |f^N(x0) - x0| = " +
                                std::to_string(std::abs(fN - x0)));
    PressureEstimate est = tree_pressure(build_tree(map, phi, x0, depth, exec));
    double rhs = birkhoff_sum(map, phi, x0, N) / N;
    return PeriodicGap{est.value, rhs, est.value - rhs};
}

} // namespace thermo
