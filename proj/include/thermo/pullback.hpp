#pragma once

#include <cstddef>
#include <vector>

#include "thermo/interval_map.hpp"
#include "thermo/parallel.hpp"
#include "thermo/potential.hpp"

namespace thermo {

// A connected component of f^{-n}(target) with its branch word.
// word[0] is the outermost inverse application (the last forward step).
struct PullBack {
    int level = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<int> word;
    bool surjective = false; // f^n(pull-back) covers the target

    double diameter() const { return hi - lo; }
};

inline constexpr std::size_t kDefaultComponentBudget = std::size_t(1) << 20;

// Exact connected components of f^{-n}([lo, hi]). Components meeting at a
// continuous turning point are coalesced; components separated by a jump
// discontinuity are kept apart (they carry distinct words).
std::vector<PullBack> interval_pullbacks(const IntervalMap& map, double target_lo,
                                         double target_hi, int n, Exec exec = Exec::Parallel,
                                         std::size_t budget = kDefaultComponentBudget);

// Forward image of x through a pull-back word (branches applied in reverse
// word order), bypassing the global branch-cut convention.
double forward_through_word(const IntervalMap& map, const std::vector<int>& word, double x);

// Birkhoff sum S_n(phi)(x) along the word path.
double birkhoff_sum_through_word(const IntervalMap& map, const std::vector<int>& word,
                                 const Potential& phi, double x);

// Polynomial-shrinking diagnostics for pull-backs of B(center, rho).
struct ShrinkingFit {
    double beta_hat = 0.0;           // power-law exponent: max_diam ~ C n^-beta
    double c_hat = 0.0;
    std::vector<double> max_diams;   // index n-1 holds level n
    bool super_polynomial = false;   // exponential fit beats the power fit
};
ShrinkingFit shrinking_fit(const IntervalMap& map, double center, double rho, int n_max,
                           Exec exec = Exec::Parallel,
                           std::size_t budget = kDefaultComponentBudget);

// C1 = c_star * c0^alpha * zeta(beta * alpha), tail summed to absolute error
// 1e-10. Throws DomainError when beta * alpha <= 1 (series diverges).
double distortion_constant(double c_star, double c0, double alpha, double beta);

// Max over pull-backs of B(center, rho) at levels 1..n of the spread of
// S_k(phi) over 32 samples per component.
double empirical_distortion(const IntervalMap& map, const Potential& phi, double center,
                            double rho, int n, Exec exec = Exec::Parallel);

} // namespace thermo
