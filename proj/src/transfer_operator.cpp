#include "thermo/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <omp.h>

#include "thermo/errors.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

CollocationOperator::CollocationOperator(const IntervalMap& map, const Potential& phi, int cells,
                                         Exec exec)
    : cells_(cells),
      lo_(map.ambient_lo()),
      hi_(map.ambient_hi()),
      map_label_(map.label()),
      potential_label_(phi.label) {
    if (cells < 16) throw PreconditionError("collocation needs at least 16 cells");
    if (phi.has_singularities() && map.has_interior_critical_points())
        throw PreconditionError(
            "singular potentials are not allowed over maps with critical points");

    const double h = (hi_ - lo_) / cells;
    nodes_.resize(cells);
    for (int i = 0; i < cells; ++i) nodes_[i] = lo_ + (i + 0.5) * h;
    rows_.resize(cells);

    int singular_node = -1; // exceptions cannot cross the parallel region
    #pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int i = 0; i < cells; ++i) {
        std::vector<Entry>& row = rows_[i];
        for (double y : map.preimages(nodes_[i])) {
            int j = std::clamp(int((y - lo_) / h), 0, cells - 1);
            double w;
            try {
                w = std::exp(phi(y));
            } catch (const SingularityError&) {
                #pragma omp critical
                singular_node = i;
                break;
            }
            auto it = std::find_if(row.begin(), row.end(),
                                   [j](const Entry& e) { return e.col == j; });
            if (it != row.end())
                it->weight += w;
            else
                row.push_back(Entry{j, w});
        }
        std::sort(row.begin(), row.end(),
                  [](const Entry& a, const Entry& b) { return a.col < b.col; });
    }
    if (singular_node >= 0)
        throw SingularityError("potential singular at a preimage of node " +
                               std::to_string(singular_node) + "; change the cell count");

    // reachability on the sparsity pattern from cell 0, forward and backward;
    // a failure only warns (stored flag), built-ins are irreducible in practice
    auto reachable_all = [&](bool transpose) {
        std::vector<char> seen(cells, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        std::vector<std::vector<int>> adj(cells);
        for (int i = 0; i < cells; ++i)
            for (const Entry& e : rows_[i])
                adj[transpose ? e.col : i].push_back(transpose ? i : e.col);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == cells;
    };
    irreducible_ = reachable_all(false) && reachable_all(true);
}

void CollocationOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(cells_, 0.0);
    for (int i = 0; i < cells_; ++i) {
        double s = 0.0;
        for (const Entry& e : rows_[i]) s += e.weight * x[e.col];
        y[i] = s;
    }
}

void CollocationOperator::apply_transpose(const std::vector<double>& x,
                                          std::vector<double>& y) const {
    y.assign(cells_, 0.0);
    for (int i = 0; i < cells_; ++i)
        for (const Entry& e : rows_[i]) y[e.col] += e.weight * x[i];
}

double CollocationOperator::row_sum(int i) const {
    double s = 0.0;
    for (const Entry& e : rows_[i]) s += e.weight;
    return s;
}

CollocationOperator build_operator(const IntervalMap& map, const Potential& phi, int cells,
                                   Exec exec) {
    return CollocationOperator(map, phi, cells, exec);
}

namespace {

struct PowerResult {
    double lambda;
    std::vector<double> vec;
    double residual;
    long iterations;
};

template <typename Apply>
PowerResult power_iteration(int n, Apply&& apply, long max_iterations) {
    std::vector<double> v(n, 1.0 / n), w(n);
    double lambda = 0.0, residual = 0.0;
    for (long it = 1; it <= max_iterations; ++it) {
        apply(v, w);
        double total = std::accumulate(w.begin(), w.end(), 0.0);
        if (!(total > 0.0))
            throw ConvergenceError("power iteration collapsed to zero", 1.0);
        lambda = total; // v is L1-normalized with nonnegative entries
        double vmax = 0.0;
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(w[i] - lambda * v[i]));
            vmax = std::max(vmax, std::abs(v[i]));
        }
        residual /= vmax;
        for (int i = 0; i < n; ++i) v[i] = w[i] / total;
        if (residual <= tol().eigen_residual)
            return PowerResult{lambda, std::move(v), residual, it};
    }
    throw ConvergenceError("power iteration did not reach residual target", residual);
}

} // namespace

EigenData leading_eigen(const CollocationOperator& op, long max_iterations) {
    const int n = op.cells();
    PowerResult right = power_iteration(
        n, [&](const std::vector<double>& x, std::vector<double>& y) { op.apply(x, y); },
        max_iterations);
    PowerResult left = power_iteration(
        n,
        [&](const std::vector<double>& x, std::vector<double>& y) { op.apply_transpose(x, y); },
        max_iterations);

    EigenData eig;
    eig.lambda = right.lambda;
    eig.left = std::move(left.vec); // already sums to 1
    eig.right = std::move(right.vec);
    double pairing = 0.0;
    for (int i = 0; i < n; ++i) pairing += eig.left[i] * eig.right[i];
    for (double& r : eig.right) r /= pairing;
    eig.residual = std::max(right.residual, left.residual);
    eig.iterations = std::max(right.iterations, left.iterations);
    return eig;
}

PressureEstimate pressure_operator(const IntervalMap& map, const Potential& phi, int cells,
                                   Exec exec, long max_iterations) {
    EigenData coarse = leading_eigen(build_operator(map, phi, std::max(16, cells / 2), exec),
                                     max_iterations);
    CollocationOperator op = build_operator(map, phi, cells, exec);
    EigenData eig = leading_eigen(op, max_iterations);
    PressureEstimate est;
    est.value = std::log(eig.lambda);
    est.method = "operator-eig";
    est.resolution = cells;
    est.residual = eig.residual;
    est.trace = {std::log(coarse.lambda), std::log(eig.lambda)};
    return est;
}

std::vector<double> equilibrium_measure(const CollocationOperator& op, const EigenData& eig) {
    const int n = op.cells();
    std::vector<double> w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = eig.left[i] * eig.right[i];
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

double measure_invariance_defect(const CollocationOperator& op, const EigenData& eig,
                                 const std::vector<double>& weights) {
    const int n = op.cells();
    // Markov kernel P[i][j] = M[i][j] right_j / (lambda right_i); push weights
    // through its adjoint and measure the L1/2 change
    std::vector<double> pushed(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double denom = eig.lambda * eig.right[i];
        if (denom <= 0.0) continue;
        for (const auto& e : op.rows()[i])
            pushed[e.col] += weights[i] * e.weight * eig.right[e.col] / denom;
    }
    double tv = 0.0;
    for (int i = 0; i < n; ++i) tv += std::abs(pushed[i] - weights[i]);
    return 0.5 * tv;
}

EntropyIntegral entropy_and_integral(const CollocationOperator& op, const Potential& phi,
                                     const std::vector<double>& weights, double pressure) {
    double integral = 0.0;
    for (int i = 0; i < op.cells(); ++i) integral += weights[i] * phi(op.nodes()[i]);
    return EntropyIntegral{pressure - integral, integral};
}

MixingEstimate mixing_rate(const CollocationOperator& op, const EigenData& eig,
                           long max_iterations) {
    const int n = op.cells();
    // deflate the leading eigenspace: v -> (M/lambda)(v - right * <left, v>)
    auto deflate = [&](std::vector<double>& v) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += eig.left[i] * v[i];
        for (int i = 0; i < n; ++i) v[i] -= c * eig.right[i];
    };
    std::vector<double> v(n), w(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(2.0 * (i + 1)); // fixed non-symmetric seed
    deflate(v);
    double norm = 0.0;
    for (double x : v) norm = std::max(norm, std::abs(x));
    if (norm == 0.0) return MixingEstimate{0.0, false};
    for (double& x : v) x /= norm;

    std::vector<double> ratios;
    for (long it = 0; it < max_iterations; ++it) {
        op.apply(v, w);
        for (double& x : w) x /= eig.lambda;
        deflate(w);
        double wnorm = 0.0;
        for (double x : w) wnorm = std::max(wnorm, std::abs(x));
        ratios.push_back(wnorm);
        if (wnorm < 1e-14) {
            // deflated iterates vanished: the subdominant spectrum is numerically nil
            return MixingEstimate{std::pow(wnorm, 1.0 / double(it + 1)), false};
        }
        for (double& x : w) x /= wnorm;
        v.swap(w);
        if (ratios.size() >= 40) {
            // geometric mean of the recent growth factors; complex pairs make
            // single steps oscillate but the mean settles
            double prod = 1.0;
            for (size_t j = ratios.size() - 20; j < ratios.size(); ++j) prod *= ratios[j];
            double rho = std::pow(prod, 1.0 / 20.0);
            double prev = 1.0;
            for (size_t j = ratios.size() - 40; j < ratios.size() - 20; ++j) prev *= ratios[j];
            double rho_prev = std::pow(prev, 1.0 / 20.0);
            if (std::abs(rho - rho_prev) < 1e-6) {
                // residual of v as an eigenvector of the deflated operator
                op.apply(v, w);
                for (double& x : w) x /= eig.lambda;
                deflate(w);
                double res = 0.0;
                for (int i = 0; i < n; ++i) res = std::max(res, std::abs(w[i] - rho * v[i]));
                return MixingEstimate{rho, res > 1e-6};
            }
        }
    }
    double prod = 1.0;
    size_t m = std::min<size_t>(20, ratios.size());
    for (size_t j = ratios.size() - m; j < ratios.size(); ++j) prod *= ratios[j];
    return MixingEstimate{std::pow(prod, 1.0 / double(m)), true};
}

std::vector<double> correlation_sum(const IntervalMap& map, const CollocationOperator& op,
                                    const Potential& psi1, const Potential& psi2,
                                    const std::vector<double>& weights, int n_max) {
    const int n = op.cells();
    std::vector<double> current(op.nodes()); // f^j(node) as j advances
    std::vector<double> psi2_vals(n);
    double mean2 = 0.0;
    for (int i = 0; i < n; ++i) {
        psi2_vals[i] = psi2(op.nodes()[i]);
        mean2 += weights[i] * psi2_vals[i];
    }
    std::vector<double> out;
    for (int j = 0; j <= n_max; ++j) {
        double cross = 0.0, mean1 = 0.0;
        for (int i = 0; i < n; ++i) {
            double v1 = psi1(current[i]);
            cross += weights[i] * v1 * psi2_vals[i];
            mean1 += weights[i] * v1;
        }
        out.push_back(std::abs(cross - mean1 * mean2));
        if (j < n_max)
            for (int i = 0; i < n; ++i) current[i] = map.evaluate(current[i]);
    }
    return out;
}

double correlation_decay_rate(const std::vector<double>& corr) {
    if (corr.size() < 2 || corr[0] <= 0.0) return 0.0;
    double rate = 0.0;
    for (size_t j = 1; j < corr.size(); ++j)
        rate = std::max(rate, std::pow(corr[j] / corr[0], 1.0 / double(j)));
    return rate;
}

} // namespace thermo
