#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermo/roots.hpp"

#include "oracles.hpp"

using thermo::bisect;
using thermo::invert_monotone;

TEST_CASE("invert_monotone recovers roots of smooth monotone functions") {
    auto g = [](double x) { return x * x * x + x; };
    auto dg = [](double x) { return 3.0 * x * x + 1.0; };
    for (double target : {0.0, 0.5, 1.5, 1.9}) {
        double x = invert_monotone(g, dg, 0.0, 1.0, target);
        CHECK(std::abs(g(x) - target) < 1e-12);
    }
}

TEST_CASE("invert_monotone matches plain bisection oracle") {
    auto g = [](double x) { return x * (1.0 + std::sqrt(x)); };
    auto dg = [](double x) { return 1.0 + 1.5 * std::sqrt(x); };
    double x = invert_monotone(g, dg, 0.0, 1.0, 1.0);
    double ref = oracles::bisect_root([&](double t) { return g(t) - 1.0; }, 0.0, 1.0);
    CHECK(x == doctest::Approx(ref).epsilon(1e-11));
    CHECK(x == doctest::Approx(0.569840).epsilon(1e-5));
}

TEST_CASE("invert_monotone stays robust where the derivative vanishes") {
    // turning-point style profile: derivative ~ 0 at the left end
    auto g = [](double x) { return x * x; };
    auto dg = [](double x) { return 2.0 * x; };
    double x = invert_monotone(g, dg, 0.0, 1.0, 1e-10);
    CHECK(std::abs(g(x) - 1e-10) < 1e-12);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
}

TEST_CASE("invert_monotone handles decreasing functions") {
    auto g = [](double x) { return 1.0 - 2.0 * x; };
    auto dg = [](double) { return -2.0; };
    double x = invert_monotone(g, dg, 0.0, 1.0, 0.25);
    CHECK(x == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("invert_monotone near-neutral slope (intermittent left branch regime)") {
    // Df ~ 1 near zero; refinement must not stall or overshoot the bracket.
    auto g = [](double x) { return x * (1.0 + std::sqrt(x)); };
    auto dg = [](double x) { return 1.0 + 1.5 * std::sqrt(x); };
    double x = invert_monotone(g, dg, 0.0, 1.0, 1e-8);
    CHECK(std::abs(g(x) - 1e-8) < 1e-12);
}

TEST_CASE("bisect finds a sign change") {
    double r = bisect([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(std::abs(std::cos(r) - r) < 1e-12);
}
