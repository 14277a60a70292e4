#pragma once

#include <string>
#include <vector>

#include "thermo/interval_map.hpp"
#include "thermo/parallel.hpp"
#include "thermo/potential.hpp"
#include "thermo/pressure_estimate.hpp"

namespace thermo {

// Midpoint-collocation discretization of L_phi g(x) = sum_{f(y)=x} e^{phi(y)} g(y).
// Row i holds the preimages of node i, bucketed by the cell containing them.
// Rows are sparse: at most one entry per branch.
class CollocationOperator {
public:
    struct Entry {
        int col;
        double weight;
    };

    CollocationOperator(const IntervalMap& map, const Potential& phi, int cells,
                        Exec exec = Exec::Parallel);

    int cells() const { return cells_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<std::vector<Entry>>& rows() const { return rows_; }
    const std::string& map_label() const { return map_label_; }
    const std::string& potential_label() const { return potential_label_; }
    bool irreducible() const { return irreducible_; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const;           // y = M x
    void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const; // y = M^T x

    double row_sum(int i) const;

private:
    int cells_;
    double lo_, hi_;
    std::vector<double> nodes_;
    std::vector<std::vector<Entry>> rows_;
    std::string map_label_, potential_label_;
    bool irreducible_ = true;
};

CollocationOperator build_operator(const IntervalMap& map, const Potential& phi, int cells,
                                   Exec exec = Exec::Parallel);

struct EigenData {
    double lambda = 0.0;
    std::vector<double> right; // eigenfunction values at nodes, sum(left*right) = 1
    std::vector<double> left;  // eigenmeasure weights, sum = 1
    double residual = 0.0;
    long iterations = 0;
};

// Power iteration on M and M^T; throws ConvergenceError past max_iterations.
EigenData leading_eigen(const CollocationOperator& op, long max_iterations = 100000);

// log of the leading eigenvalue, with the half-resolution value as diagnostics.
PressureEstimate pressure_operator(const IntervalMap& map, const Potential& phi, int cells,
                                   Exec exec = Exec::Parallel, long max_iterations = 100000);

// Approximate equilibrium state: w_j proportional to left_j * right_j.
std::vector<double> equilibrium_measure(const CollocationOperator& op, const EigenData& eig);

// Total-variation change of w under one step of the normalized operator's adjoint.
double measure_invariance_defect(const CollocationOperator& op, const EigenData& eig,
                                 const std::vector<double>& weights);

struct EntropyIntegral {
    double entropy;
    double integral;
};
EntropyIntegral entropy_and_integral(const CollocationOperator& op, const Potential& phi,
                                     const std::vector<double>& weights, double pressure);

struct MixingEstimate {
    double rho;          // modulus of the second eigenvalue of the normalized operator
    bool low_confidence; // deflation residual above threshold
};
MixingEstimate mixing_rate(const CollocationOperator& op, const EigenData& eig,
                           long max_iterations = 5000);

// C_n = |sum_j w_j psi1(f^n(node_j)) psi2(node_j) - (sum w psi1 o f^n)(sum w psi2)|
std::vector<double> correlation_sum(const IntervalMap& map, const CollocationOperator& op,
                                    const Potential& psi1, const Potential& psi2,
                                    const std::vector<double>& weights, int n_max);

// Smallest rho with C_n <= C_0 rho^n over the computed range.
double correlation_decay_rate(const std::vector<double>& corr);

} // namespace thermo
