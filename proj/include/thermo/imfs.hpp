#pragma once

#include <string>
#include <vector>

#include "thermo/interval_map.hpp"
#include "thermo/potential.hpp"
#include "thermo/pullback.hpp"

namespace thermo {

// One generator of an iterated multivalued function system: the inverse of
// f^time restricted to a surjective pull-back of the base interval B0.
struct ImfsElement {
    int time = 0;
    double b0_lo = 0.0;
    double b0_hi = 0.0;
    PullBack pullback;        // contained in B0, surjective onto it
    double birkhoff_min = 0.0; // min of S_time(phi) over samples of the pull-back
};

struct ImfsBuildResult {
    std::vector<ImfsElement> elements;
    std::vector<std::string> warnings; // times for which no admissible pull-back exists
};

// For each requested return time, picks the first (by word order) level-m
// pull-back of B0 that is contained in B0 and maps onto it under f^m.
// Throws InfeasibleError when no time yields an element.
ImfsBuildResult build_imfs(const IntervalMap& map, const Potential& phi, double b0_lo,
                           double b0_hi, const std::vector<int>& times);

// Constructs an element from an explicitly chosen pull-back (checks
// containment and surjectivity).
ImfsElement make_imfs_element(const IntervalMap& map, const Potential& phi, double b0_lo,
                              double b0_hi, const PullBack& pb);

struct FreenessResult {
    bool free = true;
    std::vector<int> witness_a, witness_b; // equal-time words with intersecting images
};

// Enumerates all words with length <= max_word_len and total return time
// <= time_budget, applies the composed multivalued inverses to x0, and checks
// that equal-time point sets are pairwise disjoint.
FreenessResult imfs_freeness_check(const IntervalMap& map,
                                   const std::vector<ImfsElement>& elements, double x0,
                                   int max_word_len, int time_budget);

// Root s0 of Phi(s) = sum_l exp(-D + m_l * target_integral) s^{m_l} = 1;
// returns -log s0, a pressure lower bound for a free IMFS.
double imfs_pressure_lower_bound(const std::vector<ImfsElement>& elements,
                                 double target_integral, double D);

// Slack constant D from the per-element Birkhoff minima, clamped at 0.
double imfs_slack(const std::vector<ImfsElement>& elements, double target_integral);

} // namespace thermo
