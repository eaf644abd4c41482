#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "landalloc/engines.hpp"
#include "landalloc/metrics.hpp"

namespace landalloc {

inline constexpr int kBundleFormatVersion = 1;

inline const std::vector<std::string> kStatsMetrics{"best_price", "best_compatibility", "hv", "gd",
                                                   "gd_plus",    "igd",                "igd_plus"};

struct LabeledEngine {
    std::string label;  // e.g. "CR+DES_C"; letters, digits and "+-_." only
    EngineConfig config;
};

struct ExperimentConfig {
    std::filesystem::path instance;
    std::filesystem::path output;
    std::vector<LabeledEngine> engines;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t workers = 0;  // 0 picks the environment default
    double alpha = 0.05;
    // Per-run quantities compared by the rank tests; see kStatsMetrics.
    std::vector<std::string> stats_metrics{"best_price", "best_compatibility", "hv", "igd_plus"};

    // Throws ConfigError.
    void validate() const;
};

// Relative paths inside the document resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);

// "3" means seeds 1..3; "4,9,11" is an explicit list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// LANDALLOC_WORKERS if set, else the hardware concurrency.
std::size_t default_worker_count();

// Bundle layout.
std::filesystem::path manifest_path(const std::filesystem::path& bundle);
std::filesystem::path bundle_instance_path(const std::filesystem::path& bundle);
std::filesystem::path run_path(const std::filesystem::path& bundle, const std::string& label, std::uint64_t seed);
std::filesystem::path timing_path(const std::filesystem::path& bundle, const std::string& label, std::uint64_t seed);
std::filesystem::path failure_path(const std::filesystem::path& bundle, const std::string& label, std::uint64_t seed);
std::filesystem::path front_path(const std::filesystem::path& bundle, const std::string& label);

struct RunOutcome {
    std::string label;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
};

struct ExperimentSummary {
    std::vector<RunOutcome> runs;  // ordered by engine, then seed

    std::size_t failed() const;
};

using EngineRunner = std::function<RunRecord(const ProblemInstance&, const EngineConfig&)>;

// Runs every (engine, seed) job on a pool of worker threads and writes the
// bundle. A throwing job leaves a failure marker and does not stop the rest.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ProblemInstance& inst,
                                 const EngineRunner& runner = run_engine);

// Per-label front merged over that label's completed runs, with provenance.
struct FrontMember {
    ObjectiveVector objectives;
    std::uint64_t seed = 0;
    std::size_t index = 0;  // into that run's final_population
};

std::vector<FrontMember> combine_label_front(const std::vector<std::pair<std::uint64_t, const RunRecord*>>& runs);
nlohmann::json label_front_to_json(const std::string& label, const std::vector<FrontMember>& front);

struct BundleManifest {
    std::vector<LabeledEngine> engines;
    std::vector<std::uint64_t> seeds;
    double alpha = 0.05;
    std::vector<std::string> stats_metrics;
};

BundleManifest load_manifest(const std::filesystem::path& bundle);

struct VerifyReport {
    std::vector<std::string> missing;    // "label/seed-N"
    std::vector<std::string> failed;
    std::vector<std::string> corrupt;
    std::vector<std::string> stale;      // combined fronts missing or out of date
    bool manifest_ok = true;
    std::string manifest_error;

    bool complete() const;
};

VerifyReport verify_bundle(const std::filesystem::path& bundle);

} // namespace landalloc
