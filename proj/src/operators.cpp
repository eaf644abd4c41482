#include "landalloc/operators.hpp"

#include <algorithm>
#include <cmath>

#include "landalloc/encoding.hpp"

namespace landalloc {

namespace {

void check_parents(const Allocation& p1, const Allocation& p2, const ProblemInstance& inst)
{
    if (p1.size() != inst.num_plots() || p2.size() != inst.num_plots()) {
        throw ModelError("parent allocation size differs from instance");
    }
}

// Chooses min(budget, |unlocked|) distinct unlocked plots uniformly.
std::vector<std::size_t> pick_unlocked(const ProblemInstance& inst, std::size_t budget, Rng& rng)
{
    std::vector<std::size_t> pool = inst.unlocked_plots();
    const std::size_t take = std::min(budget, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

FloorUses from_value(const BigInt& v, int base, int digits)
{
    return decode(EncodedPlot{clamp_encoded(v, base, digits), base, digits});
}

} // namespace

void OperatorConfig::validate() const
{
    if (!(sbx_eta > 0.0) || !(poly_eta > 0.0)) {
        throw std::invalid_argument("distribution indices must be positive");
    }
    if (!(de_scale > 0.0)) {
        throw std::invalid_argument("DE scale factor must be positive");
    }
    if (!(crossover_plot_fraction >= 0.0 && crossover_plot_fraction <= 1.0)) {
        throw std::invalid_argument("crossover_plot_fraction must be in [0, 1]");
    }
}

namespace kernels {

double sbx_beta(double u, double eta)
{
    const double exponent = 1.0 / (eta + 1.0);
    if (u <= 0.5) {
        return std::pow(2.0 * u, exponent);
    }
    return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

double polynomial_delta(double y, double width, double u, double eta)
{
    if (width <= 0.0) {
        return 0.0;
    }
    const double delta1 = y / width;
    const double delta2 = (width - y) / width;
    const double power = 1.0 / (eta + 1.0);
    if (u < 0.5) {
        const double xy = 1.0 - delta1;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
        return std::pow(val, power) - 1.0;
    }
    const double xy = 1.0 - delta2;
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
    return 1.0 - std::pow(val, power);
}

} // namespace kernels

std::pair<Allocation, Allocation> sbx_crossover(const Allocation& p1, const Allocation& p2, const OperatorConfig& cfg,
                                                const ProblemInstance& inst, Rng& rng)
{
    check_parents(p1, p2, inst);
    std::pair<Allocation, Allocation> children{p1, p2};
    const int k = inst.num_uses();
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        if (inst.plots[i].locked || !rng.bernoulli(cfg.crossover_plot_fraction)) {
            continue;
        }
        const EncodedPlot e1 = encode(p1.floor_uses[i], k);
        const EncodedPlot e2 = encode(p2.floor_uses[i], k);
        if (e1.value == e2.value) {
            continue;
        }
        const double beta = kernels::sbx_beta(rng.uniform01(), cfg.sbx_eta);
        // c1 = 0.5[(1+b)v1 + (1-b)v2] and c2 = 0.5[(1-b)v1 + (1+b)v2], written as
        // exact v1 plus a real offset so large encodings keep full precision.
        const double gap = to_double(BigInt(e2.value - e1.value));
        const BigInt c1 = e1.value + round_to_int(0.5 * (1.0 - beta) * gap);
        const BigInt c2 = e1.value + round_to_int(0.5 * (1.0 + beta) * gap);
        children.first.floor_uses[i] = from_value(c1, k, e1.digits);
        children.second.floor_uses[i] = from_value(c2, k, e1.digits);
    }
    return children;
}

std::pair<Allocation, Allocation> uniform_crossover(const Allocation& p1, const Allocation& p2,
                                                    const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng)
{
    check_parents(p1, p2, inst);
    std::pair<Allocation, Allocation> children{p1, p2};
    const double p = cfg.crossover_plot_fraction;
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        if (inst.plots[i].locked) {
            continue;
        }
        if (cfg.floorwise) {
            FloorUses& a = children.first.floor_uses[i];
            FloorUses& b = children.second.floor_uses[i];
            for (std::size_t f = 0; f < a.size(); ++f) {
                if (rng.bernoulli(p)) {
                    std::swap(a[f], b[f]);
                }
            }
        } else if (rng.bernoulli(p)) {
            std::swap(children.first.floor_uses[i], children.second.floor_uses[i]);
        }
    }
    return children;
}

Allocation random_mutation(const Allocation& a, const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation size differs from instance");
    }
    Allocation out = a;
    const auto k = static_cast<std::size_t>(inst.num_uses());
    for (std::size_t i : pick_unlocked(inst, cfg.mutation_plot_budget, rng)) {
        for (UseCode& u : out.floor_uses[i]) {
            u = static_cast<UseCode>(rng.below(k));
        }
    }
    return out;
}

Allocation polynomial_mutation(const Allocation& a, const OperatorConfig& cfg, const ProblemInstance& inst, Rng& rng)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation size differs from instance");
    }
    Allocation out = a;
    const int k = inst.num_uses();
    for (std::size_t i : pick_unlocked(inst, cfg.mutation_plot_budget, rng)) {
        const EncodedPlot e = encode(a.floor_uses[i], k);
        const BigInt hi = e.max_value();
        const double width = to_double(hi);
        const double u = rng.uniform01();
        if (hi == 0) {
            continue;
        }
        const double delta = kernels::polynomial_delta(to_double(e.value), width, u, cfg.poly_eta);
        const BigInt moved = e.value + round_to_int(delta * width);
        out.floor_uses[i] = from_value(moved, k, e.digits);
    }
    return out;
}

Allocation scaled_add(const Allocation& target, const Allocation& donor, double scale, const ProblemInstance& inst)
{
    check_parents(target, donor, inst);
    Allocation out = target;
    const int k = inst.num_uses();
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        if (inst.plots[i].locked) {
            continue;
        }
        const EncodedPlot t = encode(target.floor_uses[i], k);
        const EncodedPlot d = encode(donor.floor_uses[i], k);
        const BigInt v = t.value + round_to_int(scale * to_double(d.value));
        out.floor_uses[i] = from_value(v, k, t.digits);
    }
    return out;
}

Allocation scaled_difference(const Allocation& a, const Allocation& b, double scale, const ProblemInstance& inst)
{
    check_parents(a, b, inst);
    Allocation out = a;
    const int k = inst.num_uses();
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        if (inst.plots[i].locked) {
            continue;
        }
        const EncodedPlot ea = encode(a.floor_uses[i], k);
        const EncodedPlot eb = encode(b.floor_uses[i], k);
        const BigInt v = round_to_int(scale * to_double(BigInt(ea.value - eb.value)));
        out.floor_uses[i] = from_value(v, k, ea.digits);
    }
    return out;
}

void enforce_plot_budget(Allocation& a, const ProblemInstance& inst, double mu, Rng& rng)
{
    const auto budget = static_cast<std::size_t>(std::floor(mu * static_cast<double>(inst.num_plots()) + 1e-9));
    std::vector<std::size_t> changed;
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        if (a.floor_uses[i] != inst.plots[i].actual_uses) {
            changed.push_back(i);
        }
    }
    if (changed.size() <= budget) {
        return;
    }
    const std::size_t revert = changed.size() - budget;
    for (std::size_t r = 0; r < revert; ++r) {
        const std::size_t j = r + rng.below(changed.size() - r);
        std::swap(changed[r], changed[j]);
        a.floor_uses[changed[r]] = inst.plots[changed[r]].actual_uses;
    }
}

} // namespace landalloc
