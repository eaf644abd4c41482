#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "landalloc/model.hpp"
#include "landalloc/rng.hpp"

namespace landalloc {

struct OperatorConfig {
    double sbx_eta = 20.0;
    double poly_eta = 20.0;
    double de_scale = 0.5;
    // Per-plot participation probability for SBX and swap probability for
    // uniform crossover.
    double crossover_plot_fraction = 0.5;
    std::size_t mutation_plot_budget = 2;
    bool floorwise = false;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

// Binary tournament with replacement. `better(i, j)` is true when
// individual i is strictly fitter than j; incomparable pairs are decided by
// a fair coin. Returns pool_size population indices.
template <class Better>
std::vector<std::size_t> tournament_select(std::size_t population_size, Better&& better, std::size_t pool_size,
                                           Rng& rng)
{
    if (population_size == 0) {
        throw std::invalid_argument("tournament selection on an empty population");
    }
    std::vector<std::size_t> pool;
    pool.reserve(pool_size);
    while (pool.size() < pool_size) {
        const std::size_t a = rng.below(population_size);
        const std::size_t b = rng.below(population_size);
        if (better(a, b)) {
            pool.push_back(a);
        } else if (better(b, a)) {
            pool.push_back(b);
        } else {
            pool.push_back(rng.bernoulli(0.5) ? a : b);
        }
    }
    return pool;
}

std::pair<Allocation, Allocation> sbx_crossover(const Allocation& p1, const Allocation& p2, const OperatorConfig& cfg,
                                                const ProblemInstance& inst, Rng& rng);

std::pair<Allocation, Allocation> uniform_crossover(const Allocation& p1, const Allocation& p2,
                                                    const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng);

Allocation random_mutation(const Allocation& a, const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng);

Allocation polynomial_mutation(const Allocation& a, const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng);

// encode(target) + round(F * encode(donor)), clamped per plot.
Allocation scaled_add(const Allocation& target, const Allocation& donor, double scale, const ProblemInstance& inst);

// round(F * (encode(a) - encode(b))), clamped per plot.
Allocation scaled_difference(const Allocation& a, const Allocation& b, double scale, const ProblemInstance& inst);

// Reverts randomly chosen changed plots to their actual uses until at most
// floor(mu * N) plots differ from the actual allocation.
void enforce_plot_budget(Allocation& a, const ProblemInstance& inst, double mu, Rng& rng);

// Real-coded kernels on a single encoded value, exposed for testing.
namespace kernels {

// SBX spread factor for uniform draw u in [0, 1).
double sbx_beta(double u, double eta);

// Polynomial mutation step (in units of the domain width) for value y in
// [0, width], uniform draw u.
double polynomial_delta(double y, double width, double u, double eta);

} // namespace kernels

} // namespace landalloc
