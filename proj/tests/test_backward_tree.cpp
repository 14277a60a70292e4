#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermo/backward_tree.hpp"
#include "thermo/errors.hpp"

#include "oracles.hpp"

using namespace thermo;

TEST_CASE("full binary tree of the doubling map") {
    IntervalMap d = make_builtin("doubling");
    BackwardTree tree = build_tree(d, make_constant(0.0), 0.3, 10);
    CHECK(tree.leaves.size() == 1024);
    CHECK(tree.log_partition.back() == doctest::Approx(10.0 * std::log(2.0)).epsilon(1e-12));

    BackwardTree norm = build_tree(d, make_constant(-std::log(2.0)), 0.3, 10);
    CHECK(norm.log_partition.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("leaves re-verify forward to the base point") {
    IntervalMap f = make_intermittent(0.5);
    BackwardTree tree = build_tree(f, make_constant(0.0), 0.3, 3);
    CHECK(tree.leaves.size() == 8);
    for (const TreeLeaf& leaf : tree.leaves) {
        double y = f.iterate(leaf.point, 3).back();
        CHECK(std::abs(y - 0.3) <= 1e-8);
    }
}

TEST_CASE("leaf log-weights are Birkhoff sums of the forward path") {
    IntervalMap d = make_builtin("doubling");
    Potential phi = make_cosine(1.0, 1.0);
    BackwardTree tree = build_tree(d, phi, 0.3, 6);
    for (const TreeLeaf& leaf : tree.leaves)
        CHECK(leaf.log_weight ==
              doctest::Approx(birkhoff_sum(d, phi, leaf.point, 6)).epsilon(1e-9));
}

TEST_CASE("tree_pressure anchors") {
    IntervalMap d = make_builtin("doubling");
    PressureEstimate zero = tree_pressure(build_tree(d, make_constant(0.0), 0.3, 12));
    CHECK(zero.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(zero.method == "tree-slope");

    PressureEstimate shifted = tree_pressure(build_tree(d, make_constant(0.25), 0.3, 12));
    CHECK(shifted.value == doctest::Approx(std::log(2.0) + 0.25).epsilon(1e-12));
}

TEST_CASE("tree_pressure refuses shallow trees") {
    IntervalMap d = make_builtin("doubling");
    CHECK_THROWS_AS(tree_pressure(build_tree(d, make_constant(0.0), 0.3, 3)), PreconditionError);
}

TEST_CASE("node budget errors report the deepest completed level") {
    IntervalMap d = make_builtin("doubling");
    try {
        build_tree(d, make_constant(0.0), 0.3, 20, Exec::Serial, 64);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.deepest_completed_level >= 4);
        CHECK(e.deepest_completed_level < 8);
    }
}

TEST_CASE("geometric potential over a map with critical points is refused") {
    IntervalMap logistic = make_builtin("logistic");
    Potential geo = make_geometric(logistic, 1.0);
    CHECK_THROWS_AS(build_tree(logistic, geo, 0.3, 4), PreconditionError);
}

TEST_CASE("max_backward_birkhoff") {
    IntervalMap d = make_builtin("doubling");
    Potential phi = make_cosine(1.0, 1.0);

    BackwardTree one = build_tree(d, phi, 0.0, 1);
    BackwardMax m1 = max_backward_birkhoff(one);
    CHECK(m1.value == doctest::Approx(1.0)); // cos(0) at the preimage 0
    CHECK(m1.witness == doctest::Approx(0.0).epsilon(1e-9));

    BackwardTree c = build_tree(d, make_constant(0.7), 0.3, 6);
    CHECK(max_backward_birkhoff(c).value == doctest::Approx(0.7));

    // deep tree approaches the Dirac-at-0 maximizing value 1
    BackwardTree deep = build_tree(d, phi, 0.3, 12);
    CHECK(max_backward_birkhoff(deep).value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("max/mean sandwich for the backward Birkhoff maximum") {
    IntervalMap d = make_builtin("doubling");
    Potential phi = make_cosine(1.0, 1.0);
    const int n = 10;
    BackwardTree tree = build_tree(d, phi, 0.3, n);
    double mx = max_backward_birkhoff(tree).value;
    double logZ = tree.log_partition.back();
    double count = double(tree.leaves.size());
    CHECK(mx >= (logZ - std::log(count)) / n - 1e-12);
    CHECK(mx <= logZ / n + 1e-12);
}

TEST_CASE("periodic_gap_check anchors") {
    IntervalMap d = make_builtin("doubling");

    PeriodicGap g0 = periodic_gap_check(d, make_constant(0.0), 0.0, 1, 12);
    CHECK(g0.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(g0.rhs == doctest::Approx(0.0));
    CHECK(g0.gap == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    PeriodicGap gc = periodic_gap_check(d, make_cosine(1.0, 1.0), 0.0, 1, 14);
    CHECK(gc.rhs == doctest::Approx(1.0));
    CHECK(gc.gap > 0.0);

    PeriodicGap gn = periodic_gap_check(d, make_constant(-std::log(2.0)), 0.0, 1, 12);
    CHECK(gn.lhs == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gn.rhs == doctest::Approx(-std::log(2.0)));

    CHECK_THROWS_AS(periodic_gap_check(d, make_constant(0.0), 0.3, 1, 8), PreconditionError);
}

TEST_CASE("tree pressure is base-point robust (doubling + cosine, depth 16)") {
    IntervalMap d = make_builtin("doubling");
    Potential phi = make_cosine(1.0, 1.0);
    std::vector<double> slopes;
    for (double x0 : oracles::uniform_samples(5, 0.05, 0.95, 21))
        slopes.push_back(tree_pressure(build_tree(d, phi, x0, 16)).value);
    for (double a : slopes)
        for (double b : slopes) CHECK(std::abs(a - b) <= 0.02);
}

TEST_CASE("log Z increments stabilize for uniformly expanding builtins") {
    for (const char* name : {"doubling", "tent"}) {
        IntervalMap m = make_builtin(name);
        BackwardTree tree = build_tree(m, make_cosine(1.0, 1.0), 0.3, 14);
        const auto& z = tree.log_partition;
        for (size_t k = z.size() - 5; k + 1 < z.size(); ++k) {
            double inc1 = z[k] - z[k - 1];
            double inc2 = z[k + 1] - z[k];
            CHECK(std::abs(inc1 - inc2) <= 0.05);
        }
    }
}

TEST_CASE("subtree consistency: level-1 subtrees recombine to log Z_n") {
    IntervalMap d = make_builtin("doubling");
    Potential phi = make_cosine(1.0, 1.0);
    const int n = 8;
    double x0 = 0.3;
    BackwardTree full = build_tree(d, phi, x0, n);

    std::vector<double> parts;
    for (double y : d.preimages(x0)) {
        BackwardTree sub = build_tree(d, phi, y, n - 1);
        // S_n along the recombined path adds phi at the level-1 node
        std::vector<double> logs;
        for (const TreeLeaf& leaf : sub.leaves)
            logs.push_back(leaf.log_weight + phi(y));
        parts.push_back(log_sum_exp(logs));
    }
    CHECK(log_sum_exp(parts) == doctest::Approx(full.log_partition.back()).epsilon(1e-9));
}
