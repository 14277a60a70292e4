#include "thermo/pullback.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "thermo/backward_tree.hpp"
#include "thermo/errors.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

namespace {

// One inverse step through a single branch; nullopt-style via empty result.
bool pull_through_branch(const IntervalMap& map, int b, double lo, double hi, double& out_lo,
                         double& out_hi) {
    const Branch& br = map.branches()[b];
    double ilo = std::max(lo, br.image_lo());
    double ihi = std::min(hi, br.image_hi());
    if (!(ihi > ilo)) return false; // empty or degenerate overlap
    double x1 = map.branch_preimage(b, ilo);
    double x2 = map.branch_preimage(b, ihi);
    out_lo = std::min(x1, x2);
    out_hi = std::max(x1, x2);
    return out_hi > out_lo;
}

// Components meeting at a point where the composed forward maps of both words
// take the same value (a continuous turning point of f^n) belong to the same
// topological component. Agreement of one step is not enough: the doubling
// map's f^2 jumps at 1/4 although f itself is continuous there.
bool mergeable(const IntervalMap& map, const PullBack& a, const PullBack& b) {
    if (std::abs(b.lo - a.hi) > tol().preimage_merge) return false;
    double pt = 0.5 * (a.hi + b.lo);
    double va = forward_through_word(map, a.word, pt);
    double vb = forward_through_word(map, b.word, pt);
    return std::abs(va - vb) <= tol().preimage_merge;
}

std::vector<PullBack> pull_one_level(const IntervalMap& map, const std::vector<PullBack>& comps,
                                     Exec exec) {
    const int nb = int(map.branches().size());
    std::vector<PullBack> next;
    auto expand = [&](const PullBack& c, std::vector<PullBack>& sink) {
        for (int b = 0; b < nb; ++b) {
            double lo, hi;
            if (!pull_through_branch(map, b, c.lo, c.hi, lo, hi)) continue;
            PullBack p;
            p.level = c.level + 1;
            p.lo = lo;
            p.hi = hi;
            p.word = c.word;
            p.word.push_back(b);
            sink.push_back(std::move(p));
        }
    };
    if (exec == Exec::Serial || comps.size() < 64) {
        for (const PullBack& c : comps) expand(c, next);
    } else {
        std::vector<std::vector<PullBack>> chunks;
        #pragma omp parallel
        {
            #pragma omp single
            chunks.resize(omp_get_num_threads());
            std::vector<PullBack>& local = chunks[omp_get_thread_num()];
            #pragma omp for schedule(static)
            for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(comps.size()); ++i)
                expand(comps[i], local);
        }
        for (auto& chunk : chunks)
            next.insert(next.end(), std::make_move_iterator(chunk.begin()),
                        std::make_move_iterator(chunk.end()));
    }
    std::sort(next.begin(), next.end(), [](const PullBack& a, const PullBack& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.word < b.word);
    });
    std::vector<PullBack> merged;
    for (PullBack& p : next) {
        if (!merged.empty() && mergeable(map, merged.back(), p))
            merged.back().hi = std::max(merged.back().hi, p.hi);
        else
            merged.push_back(std::move(p));
    }
    return merged;
}

} // namespace

std::vector<PullBack> interval_pullbacks(const IntervalMap& map, double target_lo,
                                         double target_hi, int n, Exec exec,
                                         std::size_t budget) {
    if (n < 1) throw PreconditionError("interval_pullbacks needs n >= 1");
    if (target_lo < map.ambient_lo() - tol().branch_gap ||
        target_hi > map.ambient_hi() + tol().branch_gap || !(target_lo < target_hi))
        throw PreconditionError("target interval must be a sub-interval of the ambient");

    PullBack root;
    root.level = 0;
    root.lo = target_lo;
    root.hi = target_hi;
    std::vector<PullBack> comps{root};
    for (int k = 1; k <= n; ++k) {
        if (comps.size() * map.branches().size() > budget)
            throw BudgetError("pull-back component budget exceeded", k - 1);
        comps = pull_one_level(map, comps, exec);
    }
    return comps;
}

double forward_through_word(const IntervalMap& map, const std::vector<int>& word, double x) {
    double y = x;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const Branch& br = map.branches()[*it];
        y = br.forward(std::clamp(y, br.domain_lo, br.domain_hi));
    }
    return y;
}

double birkhoff_sum_through_word(const IntervalMap& map, const std::vector<int>& word,
                                 const Potential& phi, double x) {
    double sum = 0.0;
    double y = x;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        sum += phi(y);
        const Branch& br = map.branches()[*it];
        y = br.forward(std::clamp(y, br.domain_lo, br.domain_hi));
    }
    return sum;
}

ShrinkingFit shrinking_fit(const IntervalMap& map, double center, double rho, int n_max,
                           Exec exec, std::size_t budget) {
    if (n_max < 6) throw PreconditionError("shrinking_fit needs n_max >= 6");
    double lo = std::max(map.ambient_lo(), center - rho);
    double hi = std::min(map.ambient_hi(), center + rho);

    ShrinkingFit fit;
    PullBack root;
    root.lo = lo;
    root.hi = hi;
    std::vector<PullBack> comps{root};
    for (int k = 1; k <= n_max; ++k) {
        if (comps.size() * map.branches().size() > budget)
            throw BudgetError("pull-back component budget exceeded", k - 1);
        comps = pull_one_level(map, comps, exec);
        double d = 0.0;
        for (const PullBack& c : comps) d = std::max(d, c.diameter());
        fit.max_diams.push_back(d);
    }

    std::vector<double> logn, n_lin, logd;
    for (int n = n_max / 2 + 1; n <= n_max; ++n) {
        logn.push_back(std::log(double(n)));
        n_lin.push_back(double(n));
        logd.push_back(std::log(std::max(fit.max_diams[n - 1], 1e-300)));
    }
    double slope_pow = least_squares_slope(logn, logd);
    fit.beta_hat = -slope_pow;

    auto fit_sse = [&](const std::vector<double>& xs) {
        double slope = least_squares_slope(xs, logd);
        double mx = 0.0, my = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += logd[i];
        }
        mx /= xs.size();
        my /= xs.size();
        double sse = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double r = logd[i] - (my + slope * (xs[i] - mx));
            sse += r * r;
        }
        return std::pair<double, double>{slope, sse};
    };
    auto [sp, sse_pow] = fit_sse(logn);
    auto [se, sse_exp] = fit_sse(n_lin);
    // intercept at log n = 0 gives log C
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < logn.size(); ++i) {
        mx += logn[i];
        my += logd[i];
    }
    mx /= logn.size();
    my /= logn.size();
    fit.c_hat = std::exp(my - sp * mx);
    fit.super_polynomial = se < 0.0 && sse_exp < sse_pow;
    return fit;
}

double distortion_constant(double c_star, double c0, double alpha, double beta) {
    double s = beta * alpha;
    if (!(s > 1.0))
        throw DomainError("distortion series diverges: beta * alpha = " + std::to_string(s) +
                          " <= 1");
    if (c_star == 0.0) return 0.0;
    // Euler-Maclaurin tail; error O(s^3 M^{-s-3}) is far below 1e-10 at M = 1e5
    const int M = 100000;
    double zeta = 0.0;
    for (int m = M - 1; m >= 1; --m) zeta += std::pow(double(m), -s);
    double Md = double(M);
    zeta += std::pow(Md, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Md, -s) +
            s * std::pow(Md, -s - 1.0) / 12.0;
    return c_star * std::pow(c0, alpha) * zeta;
}

double empirical_distortion(const IntervalMap& map, const Potential& phi, double center,
                            double rho, int n, Exec exec) {
    if (n < 1) throw PreconditionError("empirical_distortion needs n >= 1");
    double lo = std::max(map.ambient_lo(), center - rho);
    double hi = std::min(map.ambient_hi(), center + rho);
    constexpr int kSamples = 32;

    double worst = 0.0;
    PullBack root;
    root.lo = lo;
    root.hi = hi;
    std::vector<PullBack> comps{root};
    for (int k = 1; k <= n; ++k) {
        comps = pull_one_level(map, comps, exec);
        double level_worst = 0.0;
        #pragma omp parallel for reduction(max : level_worst) schedule(static) \
            if (exec == Exec::Parallel && comps.size() > 32)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(comps.size()); ++i) {
            const PullBack& c = comps[i];
            double smin = 0.0, smax = 0.0;
            for (int j = 0; j < kSamples; ++j) {
                double x = c.lo + (c.hi - c.lo) * j / double(kSamples - 1);
                double sk = birkhoff_sum_through_word(map, c.word, phi, x);
                if (j == 0) {
                    smin = smax = sk;
                } else {
                    smin = std::min(smin, sk);
                    smax = std::max(smax, sk);
                }
            }
            level_worst = std::max(level_worst, smax - smin);
        }
        worst = std::max(worst, level_worst);
    }
    return worst;
}

} // namespace thermo
