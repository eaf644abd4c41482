#include "landalloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace landalloc {

namespace {

double map_unit(double v, double lo, double hi)
{
    const double span = hi - lo;
    if (!(span > 0.0)) {
        return 0.5;
    }
    return (v - lo) / span;
}

double euclid(const ObjectiveVector& a, const ObjectiveVector& b)
{
    return std::hypot(a.compatibility - b.compatibility, a.price - b.price);
}

// ||max(a - z, 0)||
double clamped(const ObjectiveVector& a, const ObjectiveVector& z)
{
    return std::hypot(std::max(a.compatibility - z.compatibility, 0.0), std::max(a.price - z.price, 0.0));
}

template <class Distance>
double mean_nearest(std::span<const ObjectiveVector> from, std::span<const ObjectiveVector> to, double p,
                    Distance dist)
{
    if (from.empty() || to.empty()) {
        throw std::invalid_argument("distance indicators need non-empty point sets");
    }
    double acc = 0.0;
    for (const auto& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& z : to) {
            best = std::min(best, dist(a, z));
        }
        acc += std::pow(best, p);
    }
    return std::pow(acc, 1.0 / p) / static_cast<double>(from.size());
}

} // namespace

NormalizationBounds normalization_bounds(std::span<const FrontSet> universe)
{
    std::vector<ObjectiveVector> all;
    for (const auto& f : universe) {
        all.insert(all.end(), f.points.begin(), f.points.end());
    }
    return bounds_of(all);
}

std::vector<ObjectiveVector> normalize(std::span<const ObjectiveVector> points, const NormalizationBounds& bounds)
{
    std::vector<ObjectiveVector> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back({map_unit(p.compatibility, bounds.min.compatibility, bounds.max.compatibility),
                       map_unit(p.price, bounds.min.price, bounds.max.price)});
    }
    return out;
}

std::vector<ObjectiveVector> to_minimization(std::span<const ObjectiveVector> points)
{
    std::vector<ObjectiveVector> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back({1.0 - p.compatibility, 1.0 - p.price});
    }
    return out;
}

double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& ref)
{
    for (const auto& p : front) {
        if (p.compatibility < ref.compatibility || p.price < ref.price) {
            throw std::domain_error("hypervolume point lies below the reference point");
        }
    }
    std::vector<ObjectiveVector> pts(front.begin(), front.end());
    // Descending first objective; ties keep the larger second objective first.
    std::sort(pts.begin(), pts.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        if (a.compatibility != b.compatibility) {
            return a.compatibility > b.compatibility;
        }
        return a.price > b.price;
    });
    double area = 0.0;
    double covered = ref.price;
    for (const auto& p : pts) {
        if (p.price > covered) {
            area += (p.compatibility - ref.compatibility) * (p.price - covered);
            covered = p.price;
        }
    }
    return area;
}

double gd(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> z, double p)
{
    return mean_nearest(a, z, p, euclid);
}

double gd_plus(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> z, double p)
{
    return mean_nearest(a, z, p, clamped);
}

double igd(std::span<const ObjectiveVector> z, std::span<const ObjectiveVector> a, double p)
{
    return mean_nearest(z, a, p, euclid);
}

double igd_plus(std::span<const ObjectiveVector> z, std::span<const ObjectiveVector> a, double p)
{
    // Minimization inputs: the clamp keeps the amount by which the solution
    // is worse than z, i.e. max(z - a, 0) in maximization coordinates.
    return mean_nearest(z, a, p, [](const ObjectiveVector& zz, const ObjectiveVector& aa) { return clamped(aa, zz); });
}

FrontSet combine_fronts(std::span<const FrontSet> fronts, std::string label)
{
    std::vector<ObjectiveVector> all;
    for (const auto& f : fronts) {
        all.insert(all.end(), f.points.begin(), f.points.end());
    }
    std::sort(all.begin(), all.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        if (a.compatibility != b.compatibility) {
            return a.compatibility < b.compatibility;
        }
        return a.price < b.price;
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    FrontSet out{std::move(label), {}};
    for (std::size_t i : non_dominated_indices(all)) {
        out.points.push_back(all[i]);
    }
    return out;
}

IndicatorValues evaluate_indicators(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference,
                                    const NormalizationBounds& bounds)
{
    IndicatorValues v;
    const auto nf = normalize(front, bounds);
    const auto nz = normalize(reference, bounds);
    v.hv = hypervolume_2d(nf);
    const auto mf = to_minimization(nf);
    const auto mz = to_minimization(nz);
    v.gd = gd(mf, mz);
    v.gd_plus = gd_plus(mf, mz);
    v.igd = igd(mz, mf);
    v.igd_plus = igd_plus(mz, mf);
    return v;
}

} // namespace landalloc
