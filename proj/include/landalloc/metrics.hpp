#pragma once

#include <span>
#include <string>
#include <vector>

#include "landalloc/model.hpp"
#include "landalloc/pareto.hpp"

namespace landalloc {

// Points are (compatibility, price) pairs; after normalization both lie in
// [0, 1]. Maximization orientation unless a function says otherwise.
struct FrontSet {
    std::string label;
    std::vector<ObjectiveVector> points;
};

using NormalizationBounds = ObjectiveBounds;

// Bounds over every point of every set given.
NormalizationBounds normalization_bounds(std::span<const FrontSet> universe);

// Per-objective min-max map; a zero span maps to 0.5.
std::vector<ObjectiveVector> normalize(std::span<const ObjectiveVector> points, const NormalizationBounds& bounds);

// v -> 1 - v per objective, turning normalized maximization points into the
// minimization orientation the distance indicators are written for.
std::vector<ObjectiveVector> to_minimization(std::span<const ObjectiveVector> points);

// Area dominated by `front` above `ref` (maximization). Throws
// std::domain_error if a point lies below the reference in any objective.
double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& ref = {0.0, 0.0});

// Distance indicators; A is the approximation set, Z the reference set.
// GD+ and IGD+ assume minimization. Throw std::invalid_argument on empty sets.
double gd(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> z, double p = 2.0);
double gd_plus(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> z, double p = 2.0);
double igd(std::span<const ObjectiveVector> z, std::span<const ObjectiveVector> a, double p = 2.0);
double igd_plus(std::span<const ObjectiveVector> z, std::span<const ObjectiveVector> a, double p = 2.0);

// Union with dominated points removed and exact duplicates collapsed.
// Output is sorted by compatibility, then price.
FrontSet combine_fronts(std::span<const FrontSet> fronts, std::string label = "combined");

struct IndicatorValues {
    double hv = 0.0;
    double gd = 0.0;
    double gd_plus = 0.0;
    double igd = 0.0;
    double igd_plus = 0.0;
};

// Normalizes `front` and `reference` under `bounds`, computes HV against
// (0, 0) in maximization coordinates and the distance indicators after the
// 1 - v flip.
IndicatorValues evaluate_indicators(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference,
                                    const NormalizationBounds& bounds);

} // namespace landalloc
