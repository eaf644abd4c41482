#include "doctest.h"

#include "landalloc/model.hpp"
#include "test_support.hpp"

using namespace landalloc;
using namespace testsupport;

TEST_CASE("tiny instance objectives at the actual allocation")
{
    const ProblemInstance inst = tiny1();
    const ObjectiveVector o = evaluate(inst, inst.actual());
    // x1 = (.5, .5), x2 = (1, 0): both directed edges give 0.25 * 100 * 200.
    CHECK(o.compatibility == doctest::Approx(10000.0).epsilon(1e-12));
    CHECK(o.price == doctest::Approx(45.0).epsilon(1e-12));
}

TEST_CASE("proportions count floors")
{
    auto props = [](FloorUses u, int k) { return proportions(Allocation{{std::move(u)}}, 0, k); };
    CHECK(props({0, 1}, 2) == std::vector<double>{0.5, 0.5});
    CHECK(props({2, 2, 2}, 3) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(props({0, 1, 2, 0}, 3) == std::vector<double>{0.5, 0.25, 0.25});
}

TEST_CASE("objectives agree with naive loops")
{
    Rng rng(11);
    RandomInstanceSpec spec;
    spec.max_plots = 8;
    spec.max_uses = 4;
    spec.max_floors = 5;
    for (int t = 0; t < 200; ++t) {
        const ProblemInstance inst = random_instance(rng, spec);
        const Allocation a = random_allocation(inst, rng);
        CHECK(close(evaluate_compatibility(inst, a), naive_compatibility(inst, a), 1e-12));
        CHECK(close(evaluate_price(inst, a), naive_price(inst, a), 1e-12));
    }
}

TEST_CASE("price is linear in the proportions")
{
    // Doubling every price entry doubles the objective.
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        ProblemInstance inst = random_instance(rng);
        const Allocation a = random_allocation(inst, rng);
        const double p = evaluate_price(inst, a);
        for (std::size_t i = 0; i < inst.num_plots(); ++i) {
            for (int m = 0; m < inst.num_uses(); ++m) {
                inst.price(i, m) *= 2.0;
            }
        }
        CHECK(close(evaluate_price(inst, a), 2.0 * p, 1e-12));
    }
}

TEST_CASE("symmetric C and J give twice the unordered-pair sum")
{
    Rng rng(15);
    for (int t = 0; t < 100; ++t) {
        const ProblemInstance inst = random_instance(rng);
        const Allocation a = random_allocation(inst, rng);
        double unordered = 0.0;
        for (std::size_t i = 0; i < inst.num_plots(); ++i) {
            for (int j : inst.plots[i].neighbors) {
                if (static_cast<std::size_t>(j) <= i) {
                    continue;
                }
                for (int l = 0; l < inst.num_uses(); ++l) {
                    for (int m = 0; m < inst.num_uses(); ++m) {
                        unordered += inst.compat(l, m) * naive_share(inst, a, i, l) * naive_share(inst, a, j, m) *
                                     inst.plots[i].floor_space * inst.plots[j].floor_space;
                    }
                }
            }
        }
        CHECK(close(evaluate_compatibility(inst, a), 2.0 * unordered, 1e-10));
    }
}

TEST_CASE("constraints agree with a direct check")
{
    Rng rng(13);
    RandomInstanceSpec spec;
    spec.max_plots = 7;
    spec.locked_probability = 0.2;
    for (int t = 0; t < 300; ++t) {
        const ProblemInstance inst = random_instance(rng, spec);
        const Allocation a = random_allocation(inst, rng);
        const double gamma = rng.uniform(0.0, 0.6);
        const double mu = rng.uniform(0.0, 1.0);
        const ConstraintReport r = check_constraints(inst, a, gamma, mu);
        const NaiveConstraints n = naive_constraints(inst, a, gamma, mu);
        CHECK(r.area_ok == n.area_ok);
        CHECK(r.price_ok == n.price_ok);
        CHECK(r.changed_plot_count == n.changed);
        CHECK(r.plot_budget_ok == n.plot_ok);
        CHECK(r.feasible() == (n.area_ok && n.price_ok));
        CHECK((r.violation() == 0.0) == r.feasible());
    }
}

TEST_CASE("actual allocation is feasible for any gamma and mu")
{
    const ProblemInstance inst = tiny1();
    const ConstraintReport r = check_constraints(inst, inst.actual(), 0.0, 0.0);
    CHECK(r.feasible());
    CHECK(r.changed_plot_count == 0);
    CHECK(r.max_area_change_fraction == 0.0);
}

TEST_CASE("a large gamma admits every allocation in the price box")
{
    Rng rng(14);
    for (int t = 0; t < 50; ++t) {
        ProblemInstance inst = random_instance(rng);
        inst.price_min = 0.0;
        inst.price_max = 1e300;
        const Allocation a = random_allocation(inst, rng);
        // Only a use that vanished from the actual map can still fail.
        bool new_use = false;
        const auto base = use_areas(inst, inst.actual());
        const auto now = use_areas(inst, a);
        for (std::size_t m = 0; m < base.size(); ++m) {
            new_use = new_use || (base[m] == 0.0 && now[m] > 0.0);
        }
        CHECK(check_constraints(inst, a, 1e9, 1.0).feasible() == !new_use);
    }
}

TEST_CASE("validation rejects malformed allocations")
{
    const ProblemInstance inst = tiny1();
    CHECK_THROWS_AS(validate_allocation(inst, make_allocation({{0, 1}})), ModelError);
    CHECK_THROWS_AS(validate_allocation(inst, make_allocation({{0, 1}, {0}})), ModelError);
    CHECK_THROWS_AS(validate_allocation(inst, make_allocation({{0, 2}, {0, 0}})), ModelError);
    CHECK_NOTHROW(validate_allocation(inst, make_allocation({{1, 1}, {0, 1}})));
}

TEST_CASE("instance validation")
{
    ProblemInstance inst = tiny1();
    CHECK_NOTHROW(inst.validate());
    SUBCASE("one-way adjacency is kept as given")
    {
        inst.plots[1].neighbors.clear();
        CHECK_NOTHROW(inst.validate());
        CHECK(evaluate_compatibility(inst, inst.actual()) == doctest::Approx(5000.0));
    }
    SUBCASE("dangling neighbor")
    {
        inst.plots[1].neighbors = {7};
        CHECK_THROWS_AS(inst.validate(), ModelError);
    }
    SUBCASE("negative price")
    {
        inst.price(0, 0) = -1.0;
        CHECK_THROWS_AS(inst.validate(), ModelError);
    }
}
