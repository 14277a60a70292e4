#include "thermo/imfs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thermo/backward_tree.hpp"
#include "thermo/errors.hpp"
#include "thermo/tolerances.hpp"

namespace thermo {

namespace {
constexpr int kSurjectivitySamples = 64;

bool contained_in(const PullBack& pb, double lo, double hi) {
    return pb.lo >= lo - tol().endpoint_match && pb.hi <= hi + tol().endpoint_match;
}

// f^m(W) = B0: endpoint images match the boundary of B0 and interior samples
// stay inside. Interval maps are not open, so the endpoint check is essential.
bool surjective_onto(const IntervalMap& map, const PullBack& pb, double lo, double hi) {
    double u = forward_through_word(map, pb.word, pb.lo);
    double v = forward_through_word(map, pb.word, pb.hi);
    if (std::abs(std::min(u, v) - lo) > tol().endpoint_match) return false;
    if (std::abs(std::max(u, v) - hi) > tol().endpoint_match) return false;
    for (int j = 1; j + 1 < kSurjectivitySamples; ++j) {
        double x = pb.lo + (pb.hi - pb.lo) * j / double(kSurjectivitySamples - 1);
        double y = forward_through_word(map, pb.word, x);
        if (y < lo - tol().endpoint_match || y > hi + tol().endpoint_match) return false;
    }
    return true;
}

double min_birkhoff_on(const IntervalMap& map, const Potential& phi, const PullBack& pb) {
    double best = 0.0;
    for (int j = 0; j < kSurjectivitySamples; ++j) {
        double x = pb.lo + (pb.hi - pb.lo) * j / double(kSurjectivitySamples - 1);
        double s = birkhoff_sum_through_word(map, pb.word, phi, x);
        if (j == 0 || s < best) best = s;
    }
    return best;
}

} // namespace

ImfsElement make_imfs_element(const IntervalMap& map, const Potential& phi, double b0_lo,
                              double b0_hi, const PullBack& pb) {
    if (!contained_in(pb, b0_lo, b0_hi))
        throw PreconditionError("pull-back is not contained in B0");
    if (!surjective_onto(map, pb, b0_lo, b0_hi))
        throw PreconditionError("pull-back is not surjective onto B0");
    ImfsElement e;
    e.time = pb.level;
    e.b0_lo = b0_lo;
    e.b0_hi = b0_hi;
    e.pullback = pb;
    e.pullback.surjective = true;
    e.birkhoff_min = min_birkhoff_on(map, phi, pb);
    return e;
}

ImfsBuildResult build_imfs(const IntervalMap& map, const Potential& phi, double b0_lo,
                           double b0_hi, const std::vector<int>& times) {
    if (times.empty()) throw PreconditionError("build_imfs needs a non-empty time list");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw PreconditionError("times must be strictly increasing");

    ImfsBuildResult result;
    for (int m : times) {
        std::vector<PullBack> comps = interval_pullbacks(map, b0_lo, b0_hi, m);
        std::sort(comps.begin(), comps.end(),
                  [](const PullBack& a, const PullBack& b) { return a.word < b.word; });
        bool found = false;
        for (const PullBack& pb : comps) {
            if (!contained_in(pb, b0_lo, b0_hi)) continue;
            if (!surjective_onto(map, pb, b0_lo, b0_hi)) continue;
            result.elements.push_back(make_imfs_element(map, phi, b0_lo, b0_hi, pb));
            found = true;
            break;
        }
        if (!found)
            result.warnings.push_back("no surjective contained pull-back at time " +
                                      std::to_string(m));
    }
    if (result.elements.empty())
        throw InfeasibleError("IMFS construction failed: no admissible pull-back at any time");
    return result;
}

namespace {

// phi_l applied to a point set: all preimages under f^{m_l} that lie in W_l
// and whose forward path actually follows the pull-back's branch word.
std::vector<double> apply_element(const IntervalMap& map, const ImfsElement& e,
                                  const std::vector<double>& points) {
    std::vector<double> out;
    for (double p : points) {
        std::vector<double> level{p};
        for (int k = 0; k < e.time; ++k) {
            std::vector<double> next;
            for (double q : level)
                for (double y : map.preimages(q)) next.push_back(y);
            level.swap(next);
        }
        for (double y : level) {
            if (y < e.pullback.lo - tol().freeness_identify ||
                y > e.pullback.hi + tol().freeness_identify)
                continue;
            if (std::abs(forward_through_word(map, e.pullback.word, y) - p) >
                tol().endpoint_match)
                continue;
            out.push_back(y);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) {
                              return std::abs(a - b) <= tol().freeness_identify;
                          }),
              out.end());
    return out;
}

bool sets_intersect(const std::vector<double>& a, const std::vector<double>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::abs(a[i] - b[j]) <= tol().freeness_identify) return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

} // namespace

FreenessResult imfs_freeness_check(const IntervalMap& map,
                                   const std::vector<ImfsElement>& elements, double x0,
                                   int max_word_len, int time_budget) {
    // words are stored outermost-first; extending prepends the new element,
    // so the point set of the extension is phi_l applied to the current set
    struct WordSet {
        std::vector<int> word;
        int time;
        std::vector<double> points;
    };
    std::map<int, std::vector<WordSet>> by_time;

    std::vector<WordSet> frontier{WordSet{{}, 0, {x0}}};
    for (int len = 1; len <= max_word_len && !frontier.empty(); ++len) {
        std::vector<WordSet> next;
        for (const WordSet& ws : frontier) {
            for (size_t l = 0; l < elements.size(); ++l) {
                int t = ws.time + elements[l].time;
                if (t > time_budget) continue;
                WordSet ext;
                ext.word.reserve(ws.word.size() + 1);
                ext.word.push_back(int(l));
                ext.word.insert(ext.word.end(), ws.word.begin(), ws.word.end());
                ext.time = t;
                ext.points = apply_element(map, elements[l], ws.points);
                if (ext.points.empty()) continue;
                by_time[t].push_back(ext);
                next.push_back(std::move(ext));
            }
        }
        frontier.swap(next);
    }

    for (const auto& [t, group] : by_time) {
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j)
                if (sets_intersect(group[i].points, group[j].points))
                    return FreenessResult{false, group[i].word, group[j].word};
    }
    return FreenessResult{};
}

double imfs_slack(const std::vector<ImfsElement>& elements, double target_integral) {
    double d = 0.0;
    for (const ImfsElement& e : elements)
        d = std::max(d, e.time * target_integral - e.birkhoff_min);
    return d;
}

double imfs_pressure_lower_bound(const std::vector<ImfsElement>& elements,
                                 double target_integral, double D) {
    if (elements.empty()) throw PreconditionError("imfs_pressure_lower_bound needs elements");
    if (D < 0.0) throw PreconditionError("D must be >= 0");
    auto Phi = [&](double s) {
        double total = 0.0;
        for (const ImfsElement& e : elements)
            total += std::exp(e.time * (target_integral + std::log(s)) - D);
        return total;
    };
    double hi = 1.0;
    int guard = 0;
    while (Phi(hi) < 1.0) {
        hi *= 2.0;
        if (++guard > 64) throw InfeasibleError("Phi(s) stays below 1 in the search window");
    }
    double lo = 0.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (Phi(mid) >= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    double s0 = 0.5 * (lo + hi);
    return -std::log(s0);
}

} // namespace thermo
