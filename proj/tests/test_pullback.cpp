#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thermo/errors.hpp"
#include "thermo/potential.hpp"
#include "thermo/pullback.hpp"

#include "oracles.hpp"

using namespace thermo;

TEST_CASE("doubling pullbacks: explicit dyadic components") {
    IntervalMap d = make_builtin("doubling");

    auto one = interval_pullbacks(d, 0.4, 0.6, 1);
    REQUIRE(one.size() == 2);
    CHECK(one[0].lo == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(one[0].hi == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(one[1].lo == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(one[1].hi == doctest::Approx(0.8).epsilon(1e-12));

    auto five = interval_pullbacks(d, 0.4, 0.6, 5);
    REQUIRE(five.size() == 32);
    for (const PullBack& p : five) CHECK(p.diameter() == doctest::Approx(0.00625).epsilon(1e-10));
}

TEST_CASE("tent pullback merges across the turning point") {
    IntervalMap t = make_builtin("tent");
    auto comps = interval_pullbacks(t, 0.9, 1.0, 1);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].lo == doctest::Approx(0.45).epsilon(1e-11));
    CHECK(comps[0].hi == doctest::Approx(0.55).epsilon(1e-11));
}

TEST_CASE("doubling pullbacks of the full interval do not merge across f^n jumps") {
    IntervalMap d = make_builtin("doubling");
    auto comps = interval_pullbacks(d, 0.0, 1.0, 2);
    REQUIRE(comps.size() == 4); // f^2 jumps at 1/4, 1/2, 3/4
    CHECK(comps[1].lo == doctest::Approx(0.25));
    CHECK(comps[1].hi == doctest::Approx(0.5));
}

TEST_CASE("pullback refinement: each level-(n+1) component maps into one level-n component") {
    IntervalMap f = make_intermittent(0.5);
    for (int n : {1, 2, 3, 4}) {
        auto coarse = interval_pullbacks(f, 0.4, 0.6, n);
        auto fine = interval_pullbacks(f, 0.4, 0.6, n + 1);
        for (const PullBack& p : fine) {
            double y = f.evaluate(0.5 * (p.lo + p.hi));
            int containers = 0;
            for (const PullBack& q : coarse)
                if (y >= q.lo - 1e-9 && y <= q.hi + 1e-9) ++containers;
            CHECK(containers == 1);
        }
    }
}

TEST_CASE("word consistency: midpoints map into the target in n steps") {
    for (const char* name : {"doubling", "tent"}) {
        IntervalMap m = make_builtin(name);
        for (int n : {1, 3, 6}) {
            for (const PullBack& p : interval_pullbacks(m, 0.3, 0.5, n)) {
                double mid = 0.5 * (p.lo + p.hi);
                double y = m.iterate(mid, n).back();
                CHECK(y >= 0.3 - 1e-8);
                CHECK(y <= 0.5 + 1e-8);
                CHECK(forward_through_word(m, p.word, mid) == doctest::Approx(y).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("pullbacks of one level are pairwise disjoint after merging") {
    IntervalMap t = make_builtin("tent");
    auto comps = interval_pullbacks(t, 0.85, 1.0, 4);
    for (size_t i = 0; i + 1 < comps.size(); ++i)
        CHECK(comps[i].hi <= comps[i + 1].lo + 1e-9);
}

TEST_CASE("component budget error carries the deepest completed level") {
    IntervalMap d = make_builtin("doubling");
    try {
        interval_pullbacks(d, 0.4, 0.6, 20, Exec::Serial, 16);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.deepest_completed_level >= 2);
        CHECK(e.deepest_completed_level < 20);
    }
}

TEST_CASE("shrinking_fit: doubling halves exactly and is super-polynomial") {
    ShrinkingFit fit = shrinking_fit(make_builtin("doubling"), 0.5, 0.1, 12);
    REQUIRE(fit.max_diams.size() == 12);
    for (int n = 1; n <= 12; ++n)
        CHECK(fit.max_diams[n - 1] == doctest::Approx(0.2 * std::pow(2.0, -n)).epsilon(1e-9));
    CHECK(fit.super_polynomial);
}

TEST_CASE("shrinking_fit: tent is super-polynomial") {
    CHECK(shrinking_fit(make_builtin("tent"), 0.5, 0.05, 10).super_polynomial);
}

TEST_CASE("shrinking_fit: intermittent fits the 1/alpha exponent") {
    ShrinkingFit fit = shrinking_fit(make_intermittent(0.5), 0.25, 0.2, 14);
    CHECK(fit.beta_hat == doctest::Approx(2.0).epsilon(0.25)); // within +-0.5 of 1/alpha
    CHECK_FALSE(fit.super_polynomial);

    // oracle: the slowest component clings to the neutral fixed point, where the
    // left-branch inverse iterates of any point decay like (alpha n)^{-1/alpha}
    IntervalMap f = make_intermittent(0.5);
    double x = 0.45; // inside B(0.25, 0.2)
    for (int n = 0; n < 14; ++n) x = f.branch_preimage(0, x);
    double predicted = std::pow(0.5 * 14.0, -2.0);
    CHECK(std::log(x) == doctest::Approx(std::log(predicted)).epsilon(0.35));
}

TEST_CASE("shrinking_fit precondition") {
    CHECK_THROWS_AS(shrinking_fit(make_builtin("doubling"), 0.5, 0.1, 5), PreconditionError);
}

TEST_CASE("distortion_constant: zeta anchors and divergence") {
    double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    CHECK(distortion_constant(2.0, 1.5, 1.0, 2.0) == doctest::Approx(2.0 * 1.5 * pi2_6).epsilon(1e-10));
    CHECK(distortion_constant(0.0, 1.5, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(distortion_constant(1.0, 1.0, 0.5, 2.0), DomainError); // beta*alpha = 1
    CHECK_THROWS_AS(distortion_constant(1.0, 1.0, 0.4, 2.0), DomainError);

    // independent partial-sum oracle at a non-special exponent
    CHECK(distortion_constant(1.0, 1.0, 0.8, 2.0) ==
          doctest::Approx(oracles::zeta(1.6)).epsilon(1e-9));
}

TEST_CASE("distortion_constant monotonicity") {
    double base = distortion_constant(1.0, 1.0, 1.0, 2.0);
    CHECK(distortion_constant(2.0, 1.0, 1.0, 2.0) > base);
    CHECK(distortion_constant(1.0, 2.0, 1.0, 2.0) > base);
    CHECK(distortion_constant(1.0, 1.0, 1.0, 3.0) < base); // larger beta*alpha shrinks zeta
}

TEST_CASE("empirical_distortion anchors") {
    IntervalMap d = make_builtin("doubling");
    CHECK(empirical_distortion(d, make_constant(0.4), 0.5, 0.1, 8) == doctest::Approx(0.0));

    double v = empirical_distortion(d, make_expr_potential("x", 1.0), 0.5, 0.1, 12);
    CHECK(v <= 0.2);
    CHECK(v == doctest::Approx(0.2 * (1.0 - std::pow(2.0, -12.0))).epsilon(0.01));
}

TEST_CASE("empirical_distortion on the intermittent map stays under the series bound") {
    IntervalMap f = make_intermittent(0.5);
    Potential phi = make_cosine(1.0, 1.0);
    double emp = empirical_distortion(f, phi, 0.25, 0.2, 12);
    CHECK(std::isfinite(emp));

    ShrinkingFit fit = shrinking_fit(f, 0.25, 0.2, 14);
    double c_star = holder_modulus(phi, 0.0, 1.0, 800);
    double bound = distortion_constant(c_star, fit.c_hat, 1.0, fit.beta_hat);
    CHECK(emp <= bound);
}
