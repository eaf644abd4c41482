#include "landalloc/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace landalloc {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b)
{
    return a.compatibility >= b.compatibility && a.price >= b.price &&
           (a.compatibility > b.compatibility || a.price > b.price);
}

std::vector<Front> fast_non_dominated_sort(std::span<const ObjectiveVector> objs)
{
    const std::size_t n = objs.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<Front> fronts;
    Front current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(objs[p], objs[q])) {
                dominated_by_me[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(objs[q], objs[p])) {
                dominated_by_me[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) {
            current.push_back(p);
        }
    }
    while (!current.empty()) {
        Front next;
        for (std::size_t p : current) {
            for (std::size_t q : dominated_by_me[p]) {
                if (--domination_count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<Front> constrained_non_dominated_sort(std::span<const ObjectiveVector> objs,
                                                  std::span<const double> violation)
{
    std::vector<std::size_t> feasible;
    std::vector<std::size_t> infeasible;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        (violation[i] > 0.0 ? infeasible : feasible).push_back(i);
    }
    std::vector<Front> fronts;
    if (!feasible.empty()) {
        std::vector<ObjectiveVector> sub;
        sub.reserve(feasible.size());
        for (std::size_t i : feasible) {
            sub.push_back(objs[i]);
        }
        for (const Front& f : fast_non_dominated_sort(sub)) {
            Front mapped;
            mapped.reserve(f.size());
            for (std::size_t j : f) {
                mapped.push_back(feasible[j]);
            }
            fronts.push_back(std::move(mapped));
        }
    }
    std::stable_sort(infeasible.begin(), infeasible.end(),
                     [&](std::size_t a, std::size_t b) { return violation[a] < violation[b]; });
    for (std::size_t i = 0; i < infeasible.size();) {
        Front level;
        const double v = violation[infeasible[i]];
        while (i < infeasible.size() && violation[infeasible[i]] == v) {
            level.push_back(infeasible[i++]);
        }
        fronts.push_back(std::move(level));
    }
    return fronts;
}

ObjectiveBounds bounds_of(std::span<const ObjectiveVector> objs)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    ObjectiveBounds b{{inf, inf}, {-inf, -inf}};
    for (const auto& o : objs) {
        b.min.compatibility = std::min(b.min.compatibility, o.compatibility);
        b.min.price = std::min(b.min.price, o.price);
        b.max.compatibility = std::max(b.max.compatibility, o.compatibility);
        b.max.price = std::max(b.max.price, o.price);
    }
    return b;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front, const ObjectiveBounds& bounds)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> order(n);
    auto accumulate = [&](auto key, double lo, double hi) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return key(front[a]) < key(front[b]); });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double span = hi - lo;
        if (!(span > 0.0)) {
            return;
        }
        for (std::size_t r = 1; r + 1 < n; ++r) {
            dist[order[r]] += (key(front[order[r + 1]]) - key(front[order[r - 1]])) / span;
        }
    };
    accumulate([](const ObjectiveVector& o) { return o.compatibility; }, bounds.min.compatibility,
               bounds.max.compatibility);
    accumulate([](const ObjectiveVector& o) { return o.price; }, bounds.min.price, bounds.max.price);
    return dist;
}

std::vector<std::size_t> non_dominated_indices(std::span<const ObjectiveVector> objs)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objs.size() && !dominated; ++j) {
            dominated = j != i && dominates(objs[j], objs[i]);
        }
        if (!dominated) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace landalloc
