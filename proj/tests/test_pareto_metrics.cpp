#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "landalloc/metrics.hpp"
#include "landalloc/pareto.hpp"
#include "test_support.hpp"

using namespace landalloc;
using namespace testsupport;

namespace {

using Points = std::vector<ObjectiveVector>;

Points random_points(Rng& rng, std::size_t n, bool lattice = false)
{
    Points v(n);
    for (auto& p : v) {
        p = lattice ? ObjectiveVector{static_cast<double>(rng.below(6)), static_cast<double>(rng.below(6))}
                    : ObjectiveVector{rng.uniform01(), rng.uniform01()};
    }
    return v;
}

// HV by inclusion on a fine grid of cell corners taken from the points
// themselves: the dominated region is a union of boxes [0,c] x [0,p].
double box_union_area(const Points& pts)
{
    std::vector<double> xs{0.0};
    for (const auto& p : pts) {
        xs.push_back(p.compatibility);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double area = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        // Height over the strip (xs[i-1], xs[i]] is the best price among
        // points reaching at least xs[i].
        double h = 0.0;
        for (const auto& p : pts) {
            if (p.compatibility >= xs[i]) {
                h = std::max(h, p.price);
            }
        }
        area += (xs[i] - xs[i - 1]) * h;
    }
    return area;
}

} // namespace

TEST_CASE("dominance is strict")
{
    CHECK(dominates({2, 2}, {1, 1}));
    CHECK(dominates({2, 1}, {1, 1}));
    CHECK_FALSE(dominates({1, 1}, {1, 1}));
    CHECK_FALSE(dominates({2, 0}, {1, 1}));
}

TEST_CASE("non-dominated sort hand example")
{
    const Points pts{{2, 2}, {1, 1}, {0.5, 2.5}};
    auto fronts = fast_non_dominated_sort(pts);
    REQUIRE(fronts.size() == 2);
    std::sort(fronts[0].begin(), fronts[0].end());
    CHECK(fronts[0] == Front{0, 2});
    CHECK(fronts[1] == Front{1});
    const Points same(5, ObjectiveVector{1, 1});
    CHECK(fast_non_dominated_sort(same).size() == 1);
}

TEST_CASE("fronts are mutually non-dominated and each is dominated by the previous one")
{
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        const Points pts = random_points(rng, 60, t % 2 == 0);
        const auto fronts = fast_non_dominated_sort(pts);
        std::size_t total = 0;
        for (std::size_t r = 0; r < fronts.size(); ++r) {
            total += fronts[r].size();
            for (std::size_t i : fronts[r]) {
                for (std::size_t j : fronts[r]) {
                    CHECK_FALSE(naive_dominates(pts[i], pts[j]));
                }
                if (r > 0) {
                    const bool covered = std::any_of(fronts[r - 1].begin(), fronts[r - 1].end(),
                                                     [&](std::size_t j) { return naive_dominates(pts[j], pts[i]); });
                    CHECK(covered);
                }
            }
        }
        CHECK(total == pts.size());
    }
}

TEST_CASE("constrained sort puts feasible points first")
{
    const Points pts{{0, 0}, {5, 5}, {1, 1}, {9, 9}, {2, 0}};
    const std::vector<double> viol{0, 0.5, 0, 0.2, 0};
    const auto fronts = constrained_non_dominated_sort(pts, viol);
    REQUIRE(fronts.size() == 4);
    auto f0 = fronts[0];
    std::sort(f0.begin(), f0.end());
    CHECK(f0 == Front{2, 4});
    CHECK(fronts[1] == Front{0});
    CHECK(fronts[2] == Front{3});
    CHECK(fronts[3] == Front{1});
}

TEST_CASE("crowding distance")
{
    const Points pts{{0, 1}, {0.5, 0.5}, {1, 0}};
    const auto cd = crowding_distance(pts, bounds_of(pts));
    CHECK(std::isinf(cd[0]));
    CHECK(cd[1] == doctest::Approx(2.0));
    CHECK(std::isinf(cd[2]));
    CHECK(std::isinf(crowding_distance(Points{{1, 1}}, bounds_of(Points{{1, 1}}))[0]));
    const auto two = crowding_distance(Points{{0, 1}, {1, 0}}, bounds_of(Points{{0, 1}, {1, 0}}));
    CHECK((std::isinf(two[0]) && std::isinf(two[1])));
    // Zero span in price contributes nothing.
    const Points flat{{0, 3}, {0.25, 3}, {1, 3}};
    CHECK(crowding_distance(flat, bounds_of(flat))[1] == doctest::Approx(1.0));
}

TEST_CASE("hypervolume hand values")
{
    CHECK(hypervolume_2d(Points{{0.5, 0.5}}) == 0.25);
    CHECK(hypervolume_2d(Points{{1.0, 0.2}, {0.4, 0.8}}) == doctest::Approx(0.44).epsilon(1e-15));
    CHECK(hypervolume_2d(Points{}) == 0.0);
    // Dominated and repeated points add nothing.
    CHECK(hypervolume_2d(Points{{0.5, 0.5}, {0.2, 0.2}, {0.5, 0.5}}) == 0.25);
    CHECK_THROWS_AS(hypervolume_2d(Points{{-0.1, 0.5}}), std::domain_error);
}

TEST_CASE("hypervolume matches a box-union oracle")
{
    Rng rng(42);
    for (int t = 0; t < 300; ++t) {
        const Points pts = random_points(rng, 1 + rng.below(30), t % 3 == 0);
        CHECK(close(hypervolume_2d(pts), box_union_area(pts), 1e-12));
    }
}

TEST_CASE("distance indicators hand values")
{
    CHECK(gd(Points{{0, 0}}, Points{{3, 4}}) == 5.0);
    CHECK(gd_plus(Points{{2, 2}}, Points{{1, 3}}) == 1.0);
    // (sum of squared distances)^(1/2) / |Z|: sqrt(0.5 + 0.5) / 2.
    CHECK(igd(Points{{0, 1}, {1, 0}}, Points{{0.5, 0.5}}) == doctest::Approx(0.5));
    CHECK(igd(Points{{0, 0}, {1, 1}}, Points{{0, 0}}) == doctest::Approx(0.5 * std::sqrt(2.0)));
    const Points z{{0.1, 0.9}, {0.5, 0.5}};
    CHECK(gd(z, z) == 0.0);
    CHECK(igd_plus(z, z) == 0.0);
    // A point better than the reference in both (minimized) objectives has
    // zero plus-distance.
    CHECK(igd_plus(Points{{0.5, 0.5}}, Points{{0.1, 0.1}}) == 0.0);
    CHECK_THROWS_AS(gd(Points{}, z), std::invalid_argument);
    CHECK_THROWS_AS(igd(z, Points{}), std::invalid_argument);
}

TEST_CASE("plus-distances never exceed plain distances")
{
    Rng rng(43);
    for (int t = 0; t < 500; ++t) {
        const Points a = random_points(rng, 1 + rng.below(10));
        const Points z = random_points(rng, 1 + rng.below(10));
        CHECK(gd_plus(a, z) <= gd(a, z) + 1e-15);
        CHECK(igd_plus(z, a) <= igd(z, a) + 1e-15);
    }
}

TEST_CASE("normalization")
{
    const std::vector<FrontSet> sets{{"a", {{10, 100}, {20, 300}}}, {"b", {{15, 200}}}};
    const NormalizationBounds b = normalization_bounds(sets);
    CHECK(b.min == ObjectiveVector{10, 100});
    CHECK(b.max == ObjectiveVector{20, 300});
    const Points n = normalize(sets[1].points, b);
    CHECK(n[0] == ObjectiveVector{0.5, 0.5});
    // Degenerate span maps to the middle.
    const NormalizationBounds flat{{1, 1}, {1, 2}};
    CHECK(normalize(Points{{1, 2}}, flat)[0].compatibility == 0.5);
    CHECK(to_minimization(Points{{0.25, 1.0}})[0] == ObjectiveVector{0.75, 0.0});
}

TEST_CASE("indicators are invariant under translation and scaling of both sets")
{
    Rng rng(44);
    for (int t = 0; t < 50; ++t) {
        const Points a = random_points(rng, 8);
        const Points z = random_points(rng, 8);
        Points all = a;
        all.insert(all.end(), z.begin(), z.end());
        const IndicatorValues base = evaluate_indicators(a, z, bounds_of(all));
        const double sx = rng.uniform(1.0, 1e4);
        const double sy = rng.uniform(1.0, 1e4);
        const double dx = rng.uniform(-1e3, 1e3);
        const double dy = rng.uniform(-1e3, 1e3);
        auto move = [&](Points p) {
            for (auto& q : p) {
                q = {q.compatibility * sx + dx, q.price * sy + dy};
            }
            return p;
        };
        const Points ma = move(a);
        const Points mz = move(z);
        Points mall = move(all);
        const IndicatorValues moved = evaluate_indicators(ma, mz, bounds_of(mall));
        CHECK(close(base.hv, moved.hv, 1e-9));
        CHECK(close(base.gd, moved.gd, 1e-9));
        CHECK(close(base.gd_plus, moved.gd_plus, 1e-9));
        CHECK(close(base.igd, moved.igd, 1e-9));
        CHECK(close(base.igd_plus, moved.igd_plus, 1e-9));
    }
}

TEST_CASE("combined front equals the dominance filter of the union")
{
    Rng rng(45);
    for (int t = 0; t < 100; ++t) {
        std::vector<FrontSet> sets;
        Points all;
        for (int s = 0; s < 3; ++s) {
            sets.push_back({"s", random_points(rng, 1 + rng.below(15), t % 2 == 0)});
            all.insert(all.end(), sets.back().points.begin(), sets.back().points.end());
        }
        Points oracle;
        for (const auto& p : all) {
            const bool dominated =
                std::any_of(all.begin(), all.end(), [&](const ObjectiveVector& q) { return naive_dominates(q, p); });
            if (!dominated && std::find(oracle.begin(), oracle.end(), p) == oracle.end()) {
                oracle.push_back(p);
            }
        }
        std::sort(oracle.begin(), oracle.end(), [](const ObjectiveVector& x, const ObjectiveVector& y) {
            return x.compatibility != y.compatibility ? x.compatibility < y.compatibility : x.price < y.price;
        });
        CHECK(combine_fronts(sets).points == oracle);
    }
}

TEST_CASE("non_dominated_indices")
{
    const Points pts{{1, 1}, {2, 0}, {0, 2}, {0.5, 0.5}, {1, 1}};
    CHECK(non_dominated_indices(pts) == std::vector<std::size_t>{0, 1, 2, 4});
}
