#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landalloc/model.hpp"
#include "landalloc/operators.hpp"
#include "landalloc/pareto.hpp"
#include "landalloc/rng.hpp"

namespace landalloc {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Algorithm { SOA, MSBX_NSGA2, CR_DES, MSBX_MO };
enum class CrossoverKind { SBX, Uniform };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

// Area and plot constraints in effect during generations 1..G-1 and at the
// final generation G. The price box is never relaxed.
struct RelaxationSchedule {
    double gamma_search = 0.3;
    double mu_search = 0.2;
    double gamma_final = 0.3;
    double mu_final = 0.2;

    static RelaxationSchedule constant(double gamma, double mu) { return {gamma, mu, gamma, mu}; }
    bool operator==(const RelaxationSchedule&) const = default;
};

struct EngineConfig {
    Algorithm algorithm = Algorithm::CR_DES;
    std::size_t population_size = 100;
    std::size_t generations = 150;
    double init_change_fraction = 0.25;
    std::size_t init_retry_cap = 50;
    // SOA fitness = soa_a * price + soa_b * compatibility on raw objectives.
    double soa_a = 0.5;
    double soa_b = 0.5;
    double de_child_probability = 0.2;
    double mutation_probability = 0.1;
    // Unset means the instance's gamma and mu throughout.
    std::optional<RelaxationSchedule> relax;
    OperatorConfig operators;
    // Replaces the algorithm's own crossover; lets a run reproduce another
    // engine's variation path.
    std::optional<CrossoverKind> crossover_override;
    std::uint64_t seed = 1;

    // Throws ConfigError.
    void validate() const;
};

struct Individual {
    Allocation allocation;
    ObjectiveVector objectives;
    std::size_t rank = 0;
    double crowding = 0.0;
    bool feasible = true;     // under the constraints of the current phase
    double violation = 0.0;   // normalized area + price excess, 0 when feasible
};

struct RunRecord {
    EngineConfig config;
    RelaxationSchedule schedule;
    // HV of the all-time archive of final-feasible solutions after each
    // generation, normalized by `trace_bounds`.
    std::vector<double> hv_trace;
    ObjectiveBounds trace_bounds;
    std::vector<Individual> final_population;
    // Indices into final_population; mutually non-dominated, each satisfying
    // the final area constraint and the price box.
    std::vector<std::size_t> final_front;
    // Final-population members satisfying the final constraints.
    std::size_t survivors = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;

    std::vector<ObjectiveVector> front_objectives() const;
};

struct Phase {
    double gamma = 0.0;
    double mu = 0.0;
};

RelaxationSchedule resolved_schedule(const EngineConfig& cfg, const ProblemInstance& inst);

// (gamma_search, mu_search) for gen < generations, the final pair at gen =
// generations. gen is 1-based.
Phase apply_relaxation_phase(std::size_t gen, std::size_t generations, const RelaxationSchedule& schedule);

// Evaluates objectives and feasibility under the given phase.
Individual make_individual(const ProblemInstance& inst, Allocation allocation, const Phase& phase);

std::vector<Individual> initialize_population(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng);

RunRecord run_soa(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng);
RunRecord run_msbx_nsga2(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng);
RunRecord run_cr_des(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng);
RunRecord run_msbx_mo(const ProblemInstance& inst, const EngineConfig& cfg, Rng& rng);

// Dispatches on cfg.algorithm with an Rng seeded from cfg.seed.
RunRecord run_engine(const ProblemInstance& inst, const EngineConfig& cfg);

} // namespace landalloc
