#pragma once

#include <functional>
#include <string>
#include <vector>

namespace thermo {

enum class Orientation { Increasing, Decreasing };

// One monotone piece of a piecewise-monotone interval map.
struct Branch {
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    Orientation orientation = Orientation::Increasing;
    std::function<double(double)> forward;
    std::function<double(double)> derivative;

    // Image endpoints ordered as an interval.
    double image_lo() const;
    double image_hi() const;
};

// A piecewise-monotone self-map of a compact interval. Immutable after
// construction; all operations are pure and safe to share across threads.
class IntervalMap {
public:
    // Validates branch monotonicity, contiguity, the self-map property, and
    // that every critical point is a branch endpoint. Throws DomainError.
    IntervalMap(double ambient_lo, double ambient_hi, std::vector<Branch> branches,
                std::vector<double> critical_points, std::string label);

    double ambient_lo() const { return ambient_lo_; }
    double ambient_hi() const { return ambient_hi_; }
    const std::vector<Branch>& branches() const { return branches_; }
    const std::vector<double>& critical_points() const { return critical_points_; }
    const std::string& label() const { return label_; }

    // Forward value; at interior branch cuts the left branch wins.
    double evaluate(double x) const;

    // All solutions of f(x) = y, one per branch whose image contains y,
    // duplicates merged, sorted ascending.
    std::vector<double> preimages(double y) const;

    // Preimage through a single branch, or nan if y misses its image.
    double branch_preimage(int branch_index, double y) const;

    // Forward orbit x, f(x), ..., f^n(x)  (n + 1 values).
    std::vector<double> iterate(double x, int n) const;

    // log |Df(x)|; throws SingularityError within tolerance of a critical point.
    double log_derivative(double x) const;

    double derivative(double x) const;

    // Index of the branch whose closed domain contains x (leftmost on ties).
    int branch_index(double x) const;

    bool has_interior_critical_points() const;

private:
    double ambient_lo_, ambient_hi_;
    std::vector<Branch> branches_;
    std::vector<double> critical_points_;
    std::string label_;

    void check_in_ambient(double x) const;
};

// The intermittent family x -> x(1 + x^alpha) mod 1 on [0, 1], alpha in (0, 1).
// Neutral fixed point at 0: Df(0) = 1.
IntervalMap make_intermittent(double alpha);

// Standard test maps: "doubling", "tent", "logistic", "chebyshev-like".
IntervalMap make_builtin(const std::string& name);

// Map from user branches given as expression strings (see Expr grammar).
struct ExprBranchSpec {
    double domain_lo, domain_hi;
    std::string expr;
};
IntervalMap make_piecewise(double ambient_lo, double ambient_hi,
                           const std::vector<ExprBranchSpec>& branches,
                           const std::string& label = "piecewise");

} // namespace thermo
