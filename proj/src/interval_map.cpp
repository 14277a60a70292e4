#include "thermo/interval_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "thermo/errors.hpp"
#include "thermo/expr.hpp"
#include "thermo/roots.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

namespace {
constexpr int kValidationSamples = 33;
}

double Branch::image_lo() const { return std::min(forward(domain_lo), forward(domain_hi)); }
double Branch::image_hi() const { return std::max(forward(domain_lo), forward(domain_hi)); }

IntervalMap::IntervalMap(double ambient_lo, double ambient_hi, std::vector<Branch> branches,
                         std::vector<double> critical_points, std::string label)
    : ambient_lo_(ambient_lo),
      ambient_hi_(ambient_hi),
      branches_(std::move(branches)),
      critical_points_(std::move(critical_points)),
      label_(std::move(label)) {
    if (!(ambient_lo_ < ambient_hi_)) throw DomainError("ambient interval is degenerate");
    if (branches_.empty()) throw DomainError("map needs at least one branch");

    double expected_lo = ambient_lo_;
    for (size_t b = 0; b < branches_.size(); ++b) {
        const Branch& br = branches_[b];
        if (!(br.domain_lo < br.domain_hi))
            throw DomainError("branch " + std::to_string(b) + " has degenerate domain");
        if (std::abs(br.domain_lo - expected_lo) > tol().branch_gap)
            throw DomainError("branch domains do not partition the ambient interval");
        expected_lo = br.domain_hi;

        bool increasing = br.orientation == Orientation::Increasing;
        double prev = br.forward(br.domain_lo);
        for (int i = 1; i < kValidationSamples; ++i) {
            double x = br.domain_lo +
                       (br.domain_hi - br.domain_lo) * i / double(kValidationSamples - 1);
            double v = br.forward(x);
            if (increasing ? !(v > prev) : !(v < prev))
                throw DomainError("branch " + std::to_string(b) + " is not strictly monotone");
            prev = v;
            if (i < kValidationSamples - 1) {
                double d = br.derivative(x);
                if (increasing ? d < 0.0 : d > 0.0)
                    throw DomainError("branch " + std::to_string(b) +
                                      " derivative sign contradicts orientation");
            }
        }
        if (br.image_lo() < ambient_lo_ - tol().self_map_slack ||
            br.image_hi() > ambient_hi_ + tol().self_map_slack)
            throw DomainError("branch " + std::to_string(b) + " leaves the ambient interval");
    }
    if (std::abs(expected_lo - ambient_hi_) > tol().branch_gap)
        throw DomainError("branch domains do not cover the ambient interval");

    for (double c : critical_points_) {
        bool endpoint = false;
        for (const Branch& br : branches_)
            if (std::abs(c - br.domain_lo) <= tol().branch_gap ||
                std::abs(c - br.domain_hi) <= tol().branch_gap)
                endpoint = true;
        if (!endpoint) throw DomainError("critical point is not a branch endpoint");
    }
}

void IntervalMap::check_in_ambient(double x) const {
    if (x < ambient_lo_ - tol().branch_gap || x > ambient_hi_ + tol().branch_gap)
        throw DomainError("point " + std::to_string(x) + " outside ambient interval of " + label_);
}

int IntervalMap::branch_index(double x) const {
    check_in_ambient(x);
    for (size_t b = 0; b < branches_.size(); ++b)
        if (x <= branches_[b].domain_hi || b + 1 == branches_.size())
            return static_cast<int>(b);
    return static_cast<int>(branches_.size()) - 1;
}

double IntervalMap::evaluate(double x) const {
    const Branch& br = branches_[branch_index(x)];
    double v = br.forward(std::clamp(x, br.domain_lo, br.domain_hi));
    return std::clamp(v, ambient_lo_, ambient_hi_);
}

double IntervalMap::branch_preimage(int branch_index, double y) const {
    const Branch& br = branches_[branch_index];
    double lo = br.image_lo(), hi = br.image_hi();
    if (y < lo - tol().root_residual || y > hi + tol().root_residual)
        return std::numeric_limits<double>::quiet_NaN();
    double target = std::clamp(y, lo, hi);
    // exact hits at the domain endpoints avoid a root search
    if (target == br.forward(br.domain_lo)) return br.domain_lo;
    if (target == br.forward(br.domain_hi)) return br.domain_hi;
    return invert_monotone(br.forward, br.derivative, br.domain_lo, br.domain_hi, target);
}

std::vector<double> IntervalMap::preimages(double y) const {
    check_in_ambient(y);
    std::vector<double> xs;
    for (size_t b = 0; b < branches_.size(); ++b) {
        double x = branch_preimage(static_cast<int>(b), y);
        if (!std::isnan(x)) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> merged;
    for (double x : xs)
        if (merged.empty() || x - merged.back() > tol().preimage_merge) merged.push_back(x);
    return merged;
}

std::vector<double> IntervalMap::iterate(double x, int n) const {
    if (n < 0) throw PreconditionError("iterate needs n >= 0");
    std::vector<double> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(x);
    for (int i = 0; i < n; ++i) orbit.push_back(evaluate(orbit.back()));
    return orbit;
}

double IntervalMap::derivative(double x) const {
    const Branch& br = branches_[branch_index(x)];
    return br.derivative(std::clamp(x, br.domain_lo, br.domain_hi));
}

double IntervalMap::log_derivative(double x) const {
    check_in_ambient(x);
    for (double c : critical_points_)
        if (std::abs(x - c) <= tol().singularity_radius)
            throw SingularityError("log |Df| is singular at critical point " + std::to_string(c));
    return std::log(std::abs(derivative(x)));
}

bool IntervalMap::has_interior_critical_points() const {
    for (double c : critical_points_)
        if (c >= ambient_lo_ && c <= ambient_hi_) return true;
    return false;
}

IntervalMap make_intermittent(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("intermittent alpha must be in (0,1)");
    auto g = [alpha](double x) { return x * (1.0 + std::pow(x, alpha)); };
    auto dg = [alpha](double x) { return 1.0 + (1.0 + alpha) * std::pow(x, alpha); };
    double cut = invert_monotone(g, dg, 0.0, 1.0, 1.0); // x* with x*(1 + x*^alpha) = 1

    Branch left{0.0, cut, Orientation::Increasing, g, dg};
    Branch right{cut, 1.0, Orientation::Increasing, [g](double x) { return g(x) - 1.0; }, dg};
    return IntervalMap(0.0, 1.0, {left, right}, {},
                       "intermittent(alpha=" + std::to_string(alpha) + ")");
}

IntervalMap make_builtin(const std::string& name) {
    if (name == "doubling") {
        auto d = [](double) { return 2.0; };
        Branch l{0.0, 0.5, Orientation::Increasing, [](double x) { return 2.0 * x; }, d};
        Branch r{0.5, 1.0, Orientation::Increasing, [](double x) { return 2.0 * x - 1.0; }, d};
        return IntervalMap(0.0, 1.0, {l, r}, {}, "doubling");
    }
    if (name == "tent") {
        Branch l{0.0, 0.5, Orientation::Increasing, [](double x) { return 2.0 * x; },
                 [](double) { return 2.0; }};
        Branch r{0.5, 1.0, Orientation::Decreasing, [](double x) { return 2.0 - 2.0 * x; },
                 [](double) { return -2.0; }};
        return IntervalMap(0.0, 1.0, {l, r}, {}, "tent");
    }
    if (name == "logistic") {
        auto f = [](double x) { return 4.0 * x * (1.0 - x); };
        auto d = [](double x) { return 4.0 - 8.0 * x; };
        Branch l{0.0, 0.5, Orientation::Increasing, f, d};
        Branch r{0.5, 1.0, Orientation::Decreasing, f, d};
        return IntervalMap(0.0, 1.0, {l, r}, {0.5}, "logistic");
    }
    if (name == "chebyshev-like") {
        auto f = [](double x) { return 2.0 * x * x - 1.0; };
        auto d = [](double x) { return 4.0 * x; };
        Branch l{-1.0, 0.0, Orientation::Decreasing, f, d};
        Branch r{0.0, 1.0, Orientation::Increasing, f, d};
        return IntervalMap(-1.0, 1.0, {l, r}, {0.0}, "chebyshev-like");
    }
    throw DomainError("unknown builtin map '" + name + "'");
}

IntervalMap make_piecewise(double ambient_lo, double ambient_hi,
                           const std::vector<ExprBranchSpec>& specs, const std::string& label) {
    std::vector<Branch> branches;
    std::vector<double> critical;
    for (const ExprBranchSpec& spec : specs) {
        Expr f = Expr::parse(spec.expr);
        Expr df = f.derivative();
        Orientation orient = f.eval(spec.domain_hi) > f.eval(spec.domain_lo)
                                 ? Orientation::Increasing
                                 : Orientation::Decreasing;
        branches.push_back(Branch{spec.domain_lo, spec.domain_hi, orient,
                                  [f](double x) { return f.eval(x); },
                                  [df](double x) { return df.eval(x); }});
        // endpoints with vanishing derivative are recorded as critical points
        for (double e : {spec.domain_lo, spec.domain_hi})
            if (std::abs(df.eval(e)) < tol().flat_derivative) critical.push_back(e);
    }
    std::sort(critical.begin(), critical.end());
    critical.erase(std::unique(critical.begin(), critical.end()), critical.end());
    return IntervalMap(ambient_lo, ambient_hi, std::move(branches), std::move(critical), label);
}

} // namespace thermo
