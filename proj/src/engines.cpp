#include "landalloc/engines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "landalloc/metrics.hpp"

namespace landalloc {

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::SOA:
        return "SOA";
    case Algorithm::MSBX_NSGA2:
        return "MSBX_NSGA2";
    case Algorithm::CR_DES:
        return "CR_DES";
    case Algorithm::MSBX_MO:
        return "MSBX_MO";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& name)
{
    for (Algorithm a : {Algorithm::SOA, Algorithm::MSBX_NSGA2, Algorithm::CR_DES, Algorithm::MSBX_MO}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw ConfigError("unknown algorithm '" + name + "' (expected SOA, MSBX_NSGA2, CR_DES or MSBX_MO)");
}

void EngineConfig::validate() const
{
    auto probability = [](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(std::string(what) + " must be in [0, 1]");
        }
    };
    if (population_size < 2) {
        throw ConfigError("population_size must be at least 2");
    }
    if (generations < 1) {
        throw ConfigError("generations must be at least 1");
    }
    probability(init_change_fraction, "init_change_fraction");
    probability(de_child_probability, "de_child_probability");
    probability(mutation_probability, "mutation_probability");
    if (algorithm == Algorithm::SOA && std::abs(soa_a + soa_b - 1.0) > 1e-9) {
        throw ConfigError("SOA weights must satisfy a + b = 1");
    }
    if (relax) {
        if (relax->gamma_search < 0.0 || relax->gamma_final < 0.0) {
            throw ConfigError("relaxation gamma must be non-negative");
        }
        probability(relax->mu_search, "mu_search");
        probability(relax->mu_final, "mu_final");
    }
    if (!(operators.sbx_eta > 0.0) || !(operators.poly_eta > 0.0)) {
        throw ConfigError("distribution indices must be positive");
    }
    if (!(operators.de_scale >= 0.0)) {
        throw ConfigError("de_scale must be non-negative");
    }
    probability(operators.crossover_plot_fraction, "crossover_plot_fraction");
}

std::vector<ObjectiveVector> RunRecord::front_objectives() const
{
    std::vector<ObjectiveVector> out;
    out.reserve(final_front.size());
    for (std::size_t i : final_front) {
        out.push_back(final_population[i].objectives);
    }
    return out;
}

RelaxationSchedule resolved_schedule(const EngineConfig& cfg, const ProblemInstance& inst)
{
    return cfg.relax ? *cfg.relax : RelaxationSchedule::constant(inst.gamma, inst.mu);
}

Phase apply_relaxation_phase(std::size_t gen, std::size_t generations, const RelaxationSchedule& schedule)
{
    if (gen >= generations) {
        return {schedule.gamma_final, schedule.mu_final};
    }
    return {schedule.gamma_search, schedule.mu_search};
}

Individual make_individual(const ProblemInstance& inst, Allocation allocation, const Phase& phase)
{
    Individual ind;
    ind.objectives = evaluate(inst, allocation);
    const ConstraintReport r = check_constraints(inst, allocation, phase.gamma, phase.mu, ind.objectives.price);
    ind.feasible = r.feasible();
    ind.violation = ind.feasible ? 0.0 : std::max(r.violation(), 1e-300);
    ind.allocation = std::move(allocation);
    return ind;
}

namespace {

// All-time non-dominated set of objective vectors.
class Archive {
public:
    void add(const ObjectiveVector& p)
    {
        for (const auto& q : points_) {
            if (q == p || dominates(q, p)) {
                return;
            }
        }
        std::erase_if(points_, [&](const ObjectiveVector& q) { return dominates(p, q); });
        points_.push_back(p);
    }
    const std::vector<ObjectiveVector>& points() const { return points_; }

private:
    std::vector<ObjectiveVector> points_;
};

enum class Family { Scalar, Nsga, DeMutant };

class GenerationalRun {
public:
    GenerationalRun(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
        : inst_(inst), cfg_(cfg), rng_(rng), schedule_(resolved_schedule(cfg, inst)),
          final_phase_{schedule_.gamma_final, schedule_.mu_final}
    {
        cfg_.validate();
        validate_allocation(inst_, inst_.actual());
    }

    RunRecord run(Family family)
    {
        const auto start = std::chrono::steady_clock::now();
        family_ = family;
        const std::size_t n = cfg_.population_size;
        const std::size_t generations = cfg_.generations;

        std::vector<Individual> pop = initialize_population(inst_, cfg_, rng_);
        Phase phase = apply_relaxation_phase(1, generations, schedule_);
        for (const auto& ind : pop) {
            record(ind, phase);
        }
        std::vector<std::vector<ObjectiveVector>> snapshots;
        snapshots.reserve(generations);

        for (std::size_t gen = 1; gen <= generations; ++gen) {
            const Phase now = apply_relaxation_phase(gen, generations, schedule_);
            if (now.gamma != phase.gamma || now.mu != phase.mu) {
                phase = now;
                for (auto& ind : pop) {
                    refresh(ind, phase);
                }
            }
            assign_fitness(pop);

            std::vector<Individual> offspring = vary(pop, phase);
            for (const auto& child : offspring) {
                record(child, phase);
            }
            pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
                       std::make_move_iterator(offspring.end()));
            pop = survive(std::move(pop), n);
            snapshots.push_back(archive_.points());
        }
        assign_fitness(pop);

        RunRecord rec;
        rec.config = cfg_;
        rec.schedule = schedule_;
        rec.seed = cfg_.seed;
        finish(rec, std::move(pop), snapshots);
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
    }

private:
    double scalar(const Individual& ind) const
    {
        return cfg_.soa_a * ind.objectives.price + cfg_.soa_b * ind.objectives.compatibility;
    }

    bool scalar_better(const Individual& a, const Individual& b) const
    {
        if (a.feasible != b.feasible) {
            return a.feasible;
        }
        if (!a.feasible) {
            return a.violation < b.violation;
        }
        return scalar(a) > scalar(b);
    }

    static bool crowded_better(const Individual& a, const Individual& b)
    {
        if (a.rank != b.rank) {
            return a.rank < b.rank;
        }
        return a.crowding > b.crowding;
    }

    // Adds ind to the archive when it satisfies the final constraints; the
    // feasibility flag is reused when it was computed under the final gamma.
    void record(const Individual& ind, const Phase& evaluated)
    {
        bool ok = ind.feasible;
        if (evaluated.gamma != final_phase_.gamma) {
            ok = check_constraints(inst_, ind.allocation, final_phase_.gamma, final_phase_.mu, ind.objectives.price)
                     .feasible();
        }
        if (ok) {
            archive_.add(ind.objectives);
        }
    }

    void refresh(Individual& ind, const Phase& phase)
    {
        const ConstraintReport r = check_constraints(inst_, ind.allocation, phase.gamma, phase.mu, ind.objectives.price);
        ind.feasible = r.feasible();
        ind.violation = ind.feasible ? 0.0 : std::max(r.violation(), 1e-300);
    }

    Individual make(Allocation a, const Phase& phase)
    {
        enforce_plot_budget(a, inst_, phase.mu, rng_);
        return make_individual(inst_, std::move(a), phase);
    }

    void assign_fitness(std::vector<Individual>& pop) const
    {
        if (family_ == Family::Scalar) {
            std::vector<std::size_t> order(pop.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return scalar_better(pop[a], pop[b]); });
            for (std::size_t r = 0; r < order.size(); ++r) {
                pop[order[r]].rank = r;
                pop[order[r]].crowding = 0.0;
            }
            return;
        }
        std::vector<ObjectiveVector> objs;
        std::vector<double> viol;
        objs.reserve(pop.size());
        viol.reserve(pop.size());
        for (const auto& ind : pop) {
            objs.push_back(ind.objectives);
            viol.push_back(ind.violation);
        }
        const auto fronts = constrained_non_dominated_sort(objs, viol);
        for (std::size_t r = 0; r < fronts.size(); ++r) {
            std::vector<ObjectiveVector> fo;
            fo.reserve(fronts[r].size());
            for (std::size_t i : fronts[r]) {
                fo.push_back(objs[i]);
            }
            const auto cd = crowding_distance(fo, bounds_of(fo));
            for (std::size_t t = 0; t < fronts[r].size(); ++t) {
                pop[fronts[r][t]].rank = r;
                pop[fronts[r][t]].crowding = cd[t];
            }
        }
    }

    CrossoverKind crossover() const
    {
        if (cfg_.crossover_override) {
            return *cfg_.crossover_override;
        }
        return cfg_.algorithm == Algorithm::CR_DES ? CrossoverKind::Uniform : CrossoverKind::SBX;
    }

    std::pair<Allocation, Allocation> cross(const Allocation& a, const Allocation& b)
    {
        if (crossover() == CrossoverKind::Uniform) {
            return uniform_crossover(a, b, cfg_.operators, inst_, rng_);
        }
        return sbx_crossover(a, b, cfg_.operators, inst_, rng_);
    }

    std::vector<Individual> vary(const std::vector<Individual>& pop, const Phase& phase)
    {
        const std::size_t n = cfg_.population_size;
        std::vector<Individual> children;
        children.reserve(n + 1);

        if (family_ == Family::DeMutant) {
            for (std::size_t i = 0; i < pop.size() && children.size() < n; ++i) {
                std::size_t donor = i;
                if (pop.size() > 1) {
                    donor = rng_.below(pop.size() - 1);
                    if (donor >= i) {
                        ++donor;
                    }
                }
                const Allocation mutant =
                    scaled_add(pop[i].allocation, pop[donor].allocation, cfg_.operators.de_scale, inst_);
                auto [c1, c2] = sbx_crossover(mutant, pop[i].allocation, cfg_.operators, inst_, rng_);
                children.push_back(make(rng_.bernoulli(0.5) ? std::move(c1) : std::move(c2), phase));
            }
            return children;
        }

        const std::size_t pool_size = std::max<std::size_t>(2, n / 2);
        std::vector<std::size_t> pool;
        if (family_ == Family::Scalar) {
            pool = tournament_select(
                pop.size(), [&](std::size_t a, std::size_t b) { return scalar_better(pop[a], pop[b]); }, pool_size,
                rng_);
        } else {
            pool = tournament_select(
                pop.size(), [&](std::size_t a, std::size_t b) { return crowded_better(pop[a], pop[b]); }, pool_size,
                rng_);
        }

        const double de_p = cfg_.algorithm == Algorithm::CR_DES ? cfg_.de_child_probability : 0.0;
        const double mut_p = cfg_.mutation_probability;
        while (children.size() < n) {
            const Allocation& p1 = pop[pool[rng_.below(pool.size())]].allocation;
            const Allocation& p2 = pop[pool[rng_.below(pool.size())]].allocation;
            const double r = rng_.uniform01();
            if (r < de_p) {
                children.push_back(make(scaled_difference(p1, p2, cfg_.operators.de_scale, inst_), phase));
                continue;
            }
            Allocation c1;
            Allocation c2;
            if (r < de_p + mut_p) {
                if (family_ == Family::Scalar) {
                    c1 = random_mutation(p1, cfg_.operators, inst_, rng_);
                    c2 = random_mutation(p2, cfg_.operators, inst_, rng_);
                } else {
                    c1 = polynomial_mutation(p1, cfg_.operators, inst_, rng_);
                    c2 = polynomial_mutation(p2, cfg_.operators, inst_, rng_);
                }
            } else {
                const Allocation m1 = random_mutation(p1, cfg_.operators, inst_, rng_);
                const Allocation m2 = random_mutation(p2, cfg_.operators, inst_, rng_);
                std::tie(c1, c2) = cross(m1, m2);
            }
            children.push_back(make(std::move(c1), phase));
            if (children.size() < n) {
                children.push_back(make(std::move(c2), phase));
            }
        }
        return children;
    }

    std::vector<Individual> survive(std::vector<Individual> merged, std::size_t n) const
    {
        std::vector<Individual> next;
        next.reserve(n);
        if (family_ == Family::Scalar) {
            std::vector<std::size_t> order(merged.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return scalar_better(merged[a], merged[b]); });
            for (std::size_t r = 0; r < n && r < order.size(); ++r) {
                next.push_back(std::move(merged[order[r]]));
            }
            return next;
        }
        std::vector<ObjectiveVector> objs;
        std::vector<double> viol;
        for (const auto& ind : merged) {
            objs.push_back(ind.objectives);
            viol.push_back(ind.violation);
        }
        for (const Front& front : constrained_non_dominated_sort(objs, viol)) {
            if (next.size() + front.size() <= n) {
                for (std::size_t i : front) {
                    next.push_back(std::move(merged[i]));
                }
                continue;
            }
            std::vector<ObjectiveVector> fo;
            for (std::size_t i : front) {
                fo.push_back(objs[i]);
            }
            const auto cd = crowding_distance(fo, bounds_of(fo));
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            for (std::size_t t = 0; next.size() < n; ++t) {
                next.push_back(std::move(merged[front[order[t]]]));
            }
            break;
        }
        return next;
    }

    void finish(RunRecord& rec, std::vector<Individual> pop, const std::vector<std::vector<ObjectiveVector>>& snapshots)
    {
        std::vector<std::size_t> ok;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const ConstraintReport r = check_constraints(inst_, pop[i].allocation, final_phase_.gamma,
                                                         final_phase_.mu, pop[i].objectives.price);
            if (r.feasible()) {
                ok.push_back(i);
            }
        }
        rec.survivors = ok.size();

        std::vector<ObjectiveVector> objs;
        for (std::size_t i : ok) {
            objs.push_back(pop[i].objectives);
        }
        for (std::size_t t : non_dominated_indices(objs)) {
            const std::size_t i = ok[t];
            const bool duplicate = std::any_of(rec.final_front.begin(), rec.final_front.end(), [&](std::size_t j) {
                return pop[j].allocation == pop[i].allocation;
            });
            if (!duplicate) {
                rec.final_front.push_back(i);
            }
        }

        std::vector<ObjectiveVector> universe{evaluate(inst_, inst_.actual())};
        for (const auto& snap : snapshots) {
            universe.insert(universe.end(), snap.begin(), snap.end());
        }
        rec.trace_bounds = bounds_of(universe);
        rec.hv_trace.reserve(snapshots.size());
        for (const auto& snap : snapshots) {
            rec.hv_trace.push_back(hypervolume_2d(normalize(snap, rec.trace_bounds)));
        }
        rec.final_population = std::move(pop);
    }

    const ProblemInstance& inst_;
    EngineConfig cfg_;
    Rng& rng_;
    RelaxationSchedule schedule_;
    Phase final_phase_;
    Family family_ = Family::Nsga;
    Archive archive_;
};

void require(const EngineConfig& cfg, Algorithm a)
{
    if (cfg.algorithm != a) {
        throw ConfigError("engine invoked with algorithm " + to_string(cfg.algorithm) + ", expected " + to_string(a));
    }
}

} // namespace

std::vector<Individual> initialize_population(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
{
    const RelaxationSchedule schedule = resolved_schedule(cfg, inst);
    const Phase phase = apply_relaxation_phase(1, cfg.generations, schedule);
    const std::vector<std::size_t> unlocked = inst.unlocked_plots();
    const auto changes = static_cast<std::size_t>(
        std::ceil(cfg.init_change_fraction * static_cast<double>(unlocked.size()) - 1e-9));
    OperatorConfig redraw = cfg.operators;
    redraw.mutation_plot_budget = changes;
    const Allocation actual = inst.actual();

    std::vector<Individual> pop;
    pop.reserve(cfg.population_size);
    while (pop.size() < cfg.population_size) {
        Individual candidate;
        for (std::size_t attempt = 0; attempt <= cfg.init_retry_cap; ++attempt) {
            candidate = make_individual(inst, random_mutation(actual, redraw, inst, rng), phase);
            const double price = candidate.objectives.price;
            if (price >= inst.price_min && price <= inst.price_max) {
                break;
            }
        }
        pop.push_back(std::move(candidate));
    }
    return pop;
}

RunRecord run_soa(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
{
    require(cfg, Algorithm::SOA);
    return GenerationalRun(inst, cfg, rng).run(Family::Scalar);
}

RunRecord run_msbx_nsga2(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
{
    require(cfg, Algorithm::MSBX_NSGA2);
    return GenerationalRun(inst, cfg, rng).run(Family::Nsga);
}

RunRecord run_cr_des(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
{
    require(cfg, Algorithm::CR_DES);
    return GenerationalRun(inst, cfg, rng).run(Family::Nsga);
}

RunRecord run_msbx_mo(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng)
{
    require(cfg, Algorithm::MSBX_MO);
    return GenerationalRun(inst, cfg, rng).run(Family::DeMutant);
}

RunRecord run_engine(const ProblemInstance& inst, const EngineConfig& cfg)
{
    Rng rng(cfg.seed);
    switch (cfg.algorithm) {
    case Algorithm::SOA:
        return run_soa(inst, cfg, rng);
    case Algorithm::MSBX_NSGA2:
        return run_msbx_nsga2(inst, cfg, rng);
    case Algorithm::CR_DES:
        return run_cr_des(inst, cfg, rng);
    case Algorithm::MSBX_MO:
        return run_msbx_mo(inst, cfg, rng);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace landalloc
