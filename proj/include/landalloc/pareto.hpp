#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "landalloc/model.hpp"

namespace landalloc {

using Front = std::vector<std::size_t>;

// Maximization dominance: a >= b componentwise and a != b.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

// Partitions indices into successive non-dominated fronts.
std::vector<Front> fast_non_dominated_sort(std::span<const ObjectiveVector> objs);

// Feasible-first ranking: feasible points are sorted by Pareto dominance;
// infeasible points follow, one front per distinct violation level in
// increasing order.
std::vector<Front> constrained_non_dominated_sort(std::span<const ObjectiveVector> objs,
                                                  std::span<const double> violation);

struct ObjectiveBounds {
    ObjectiveVector min;
    ObjectiveVector max;
};

ObjectiveBounds bounds_of(std::span<const ObjectiveVector> objs);

// Crowding distance of each member of `front` (values in the same order).
// Boundary members per objective get +inf; a zero span contributes nothing.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front, const ObjectiveBounds& bounds);

// Indices of the non-dominated members of `objs`, ascending.
std::vector<std::size_t> non_dominated_indices(std::span<const ObjectiveVector> objs);

} // namespace landalloc
