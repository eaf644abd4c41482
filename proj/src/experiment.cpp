#include "landalloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include "landalloc/instance_io.hpp"
#include "landalloc/records.hpp"

namespace landalloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool label_ok(const std::string& label)
{
    if (label.empty() || label.size() > 64 || label == "." || label == "..") {
        return false;
    }
    return std::all_of(label.begin(), label.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '+' ||
               c == '-' || c == '_' || c == '.';
    });
}

std::string job_name(const std::string& label, std::uint64_t seed)
{
    return label + "/seed-" + std::to_string(seed);
}

std::vector<std::uint64_t> seeds_from(const json& j)
{
    if (j.is_number_unsigned() || j.is_number_integer()) {
        const long long n = j.get<long long>();
        if (n < 1) {
            throw ConfigError("seeds: count must be positive");
        }
        std::vector<std::uint64_t> out;
        for (long long s = 1; s <= n; ++s) {
            out.push_back(static_cast<std::uint64_t>(s));
        }
        return out;
    }
    if (!j.is_array()) {
        throw ConfigError("seeds: expected a count or a list of integers");
    }
    std::vector<std::uint64_t> out;
    for (const auto& s : j) {
        if (!s.is_number_integer() || s.get<long long>() < 0) {
            throw ConfigError("seeds: entries must be non-negative integers");
        }
        out.push_back(s.get<std::uint64_t>());
    }
    return out;
}

json engines_json(const std::vector<LabeledEngine>& engines)
{
    json out = json::array();
    for (const auto& e : engines) {
        out.push_back({{"label", e.label}, {"config", engine_config_to_json(e.config)}});
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (engines.empty()) {
        throw ConfigError("experiment needs at least one engine");
    }
    std::set<std::string> labels;
    for (const auto& e : engines) {
        if (!label_ok(e.label)) {
            throw ConfigError("engine label '" + e.label + "' must be 1-64 characters from [A-Za-z0-9+-_.]");
        }
        if (!labels.insert(e.label).second) {
            throw ConfigError("duplicate engine label '" + e.label + "'");
        }
        e.config.validate();
    }
    if (seeds.empty()) {
        throw ConfigError("experiment needs at least one seed");
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        throw ConfigError("seeds must be distinct");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must be in (0, 1)");
    }
    for (const auto& m : stats_metrics) {
        if (std::find(kStatsMetrics.begin(), kStatsMetrics.end(), m) == kStatsMetrics.end()) {
            throw ConfigError("unknown stats metric '" + m + "'");
        }
    }
}

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir)
{
    if (!j.is_object()) {
        throw ConfigError("experiment config must be a JSON object");
    }
    static const std::set<std::string> known = {"instance", "output", "engines", "seeds", "workers", "stats",
                                                "metrics"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("experiment: unknown key '" + key + "'");
        }
    }
    ExperimentConfig cfg;
    auto path_field = [&](const char* key) -> fs::path {
        const auto it = j.find(key);
        if (it == j.end()) {
            return {};
        }
        if (!it->is_string()) {
            throw ConfigError(std::string("experiment.") + key + ": expected a path string");
        }
        fs::path p = it->get<std::string>();
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    cfg.instance = path_field("instance");
    cfg.output = path_field("output");
    if (const auto it = j.find("seeds"); it != j.end()) {
        cfg.seeds = seeds_from(*it);
    }
    if (const auto it = j.find("workers"); it != j.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 0) {
            throw ConfigError("experiment.workers: expected a non-negative integer");
        }
        cfg.workers = it->get<std::size_t>();
    }
    if (const auto it = j.find("stats"); it != j.end()) {
        if (!it->is_object()) {
            throw ConfigError("experiment.stats: expected an object");
        }
        for (const auto& [key, value] : it->items()) {
            if (key == "alpha") {
                if (!value.is_number()) {
                    throw ConfigError("experiment.stats.alpha: expected a number");
                }
                cfg.alpha = value.get<double>();
            } else if (key == "metrics") {
                if (!value.is_array()) {
                    throw ConfigError("experiment.stats.metrics: expected a list");
                }
                cfg.stats_metrics.clear();
                for (const auto& m : value) {
                    if (!m.is_string()) {
                        throw ConfigError("experiment.stats.metrics: expected strings");
                    }
                    cfg.stats_metrics.push_back(m.get<std::string>());
                }
            } else {
                throw ConfigError("experiment.stats: unknown key '" + key + "'");
            }
        }
    }
    if (const auto it = j.find("metrics"); it != j.end()) {
        // The only reference-set policy is the union of every compared front.
        const json want = {{"reference", "combined"}};
        if (*it != want) {
            throw ConfigError("experiment.metrics: only {\"reference\": \"combined\"} is supported");
        }
    }
    const auto engines = j.find("engines");
    if (engines == j.end() || !engines->is_array()) {
        throw ConfigError("experiment.engines: expected a list of engine configs");
    }
    for (const auto& e : *engines) {
        LabeledEngine le;
        if (!e.is_object() || !e.contains("label") || !e.at("label").is_string()) {
            throw ConfigError("experiment.engines: every engine needs a string 'label'");
        }
        le.label = e.at("label").get<std::string>();
        try {
            le.config = engine_config_from_json(e);
        } catch (const ConfigError& err) {
            throw ConfigError("engine '" + le.label + "': " + err.what());
        }
        cfg.engines.push_back(std::move(le));
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return experiment_config_from_json(j, path.parent_path());
}

json experiment_config_to_json(const ExperimentConfig& cfg)
{
    return {{"instance", cfg.instance.string()},
            {"output", cfg.output.string()},
            {"seeds", cfg.seeds},
            {"workers", cfg.workers},
            {"stats", {{"alpha", cfg.alpha}, {"metrics", cfg.stats_metrics}}},
            {"engines", engines_json(cfg.engines)}};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text)
{
    if (text.empty()) {
        throw ConfigError("empty seed list");
    }
    auto parse_one = [&](const std::string& tok) {
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw ConfigError("invalid seed '" + tok + "'");
        }
        try {
            return static_cast<std::uint64_t>(std::stoull(tok));
        } catch (const std::exception&) {
            throw ConfigError("seed '" + tok + "' is out of range");
        }
    };
    if (text.find(',') == std::string::npos) {
        const std::uint64_t n = parse_one(text);
        if (n < 1 || n > 100000) {
            throw ConfigError("seed count must be in [1, 100000]");
        }
        std::vector<std::uint64_t> out;
        for (std::uint64_t s = 1; s <= n; ++s) {
            out.push_back(s);
        }
        return out;
    }
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        out.push_back(parse_one(tok));
    }
    return out;
}

std::size_t default_worker_count()
{
    if (const char* env = std::getenv("LANDALLOC_WORKERS")) {
        try {
            const long long n = std::stoll(env);
            if (n >= 1) {
                return static_cast<std::size_t>(n);
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("LANDALLOC_WORKERS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

fs::path manifest_path(const fs::path& bundle) { return bundle / "manifest.json"; }
fs::path bundle_instance_path(const fs::path& bundle) { return bundle / "instance.landalloc.json"; }

fs::path run_path(const fs::path& bundle, const std::string& label, std::uint64_t seed)
{
    return bundle / "runs" / label / ("seed-" + std::to_string(seed) + ".json");
}

fs::path timing_path(const fs::path& bundle, const std::string& label, std::uint64_t seed)
{
    return bundle / "runs" / label / ("seed-" + std::to_string(seed) + ".timing.json");
}

fs::path failure_path(const fs::path& bundle, const std::string& label, std::uint64_t seed)
{
    return bundle / "runs" / label / ("seed-" + std::to_string(seed) + ".failed.json");
}

fs::path front_path(const fs::path& bundle, const std::string& label) { return bundle / "fronts" / (label + ".json"); }

std::size_t ExperimentSummary::failed() const
{
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.ok; }));
}

std::vector<FrontMember> combine_label_front(const std::vector<std::pair<std::uint64_t, const RunRecord*>>& runs)
{
    std::vector<FrontMember> all;
    for (const auto& [seed, rec] : runs) {
        for (std::size_t i : rec->final_front) {
            all.push_back({rec->final_population[i].objectives, seed, i});
        }
    }
    std::vector<FrontMember> out;
    for (std::size_t a = 0; a < all.size(); ++a) {
        bool keep = true;
        for (std::size_t b = 0; b < all.size() && keep; ++b) {
            if (b == a) {
                continue;
            }
            // The first copy of a repeated point survives.
            keep = !dominates(all[b].objectives, all[a].objectives) &&
                   !(b < a && all[b].objectives == all[a].objectives);
        }
        if (keep) {
            out.push_back(all[a]);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const FrontMember& x, const FrontMember& y) {
        if (x.objectives.compatibility != y.objectives.compatibility) {
            return x.objectives.compatibility < y.objectives.compatibility;
        }
        return x.objectives.price < y.objectives.price;
    });
    return out;
}

json label_front_to_json(const std::string& label, const std::vector<FrontMember>& front)
{
    json points = json::array();
    for (const auto& m : front) {
        points.push_back({{"compatibility", m.objectives.compatibility},
                          {"price", m.objectives.price},
                          {"seed", m.seed},
                          {"index", m.index}});
    }
    return {{"version", kBundleFormatVersion}, {"label", label}, {"points", std::move(points)}};
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ProblemInstance& inst, const EngineRunner& runner)
{
    cfg.validate();
    inst.validate();
    const fs::path& out = cfg.output;
    if (out.empty()) {
        throw ConfigError("experiment has no output directory");
    }
    fs::create_directories(out);
    write_file_atomic(bundle_instance_path(out), save_instance(inst));
    json manifest = {{"version", kBundleFormatVersion},
                     {"instance", bundle_instance_path(out).filename().string()},
                     {"seeds", cfg.seeds},
                     {"alpha", cfg.alpha},
                     {"stats_metrics", cfg.stats_metrics},
                     {"reference", "combined"},
                     {"engines", engines_json(cfg.engines)}};
    write_file_atomic(manifest_path(out), dump_canonical(manifest));

    struct Job {
        std::size_t engine;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
        for (std::uint64_t s : cfg.seeds) {
            jobs.push_back({e, s});
        }
    }
    std::vector<RunOutcome> outcomes(jobs.size());
    std::vector<std::optional<RunRecord>> records(jobs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            const LabeledEngine& le = cfg.engines[jobs[j].engine];
            const std::uint64_t seed = jobs[j].seed;
            RunOutcome& o = outcomes[j];
            o.label = le.label;
            o.seed = seed;
            std::error_code ec;
            fs::remove(failure_path(out, le.label, seed), ec);
            try {
                EngineConfig ec_cfg = le.config;
                ec_cfg.seed = seed;
                RunRecord rec = runner(inst, ec_cfg);
                write_file_atomic(run_path(out, le.label, seed), dump_canonical(run_record_to_json(rec, le.label)));
                write_file_atomic(timing_path(out, le.label, seed),
                                  dump_canonical({{"wall_seconds", rec.wall_seconds}}));
                // The bulk of the record is kept only for the combined fronts.
                records[j] = std::move(rec);
                o.ok = true;
            } catch (const std::exception& e) {
                o.error = e.what();
                fs::remove(run_path(out, le.label, seed), ec);
                fs::remove(timing_path(out, le.label, seed), ec);
                try {
                    write_file_atomic(failure_path(out, le.label, seed),
                                      dump_canonical({{"label", le.label}, {"seed", seed}, {"error", o.error}}));
                } catch (const std::exception&) {
                }
            }
        }
    };
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(cfg.workers == 0 ? default_worker_count() : cfg.workers, jobs.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
        std::vector<std::pair<std::uint64_t, const RunRecord*>> runs;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].engine == e && records[j]) {
                runs.emplace_back(jobs[j].seed, &*records[j]);
            }
        }
        const std::string& label = cfg.engines[e].label;
        write_file_atomic(front_path(out, label), dump_canonical(label_front_to_json(label, combine_label_front(runs))));
    }

    ExperimentSummary summary;
    summary.runs = std::move(outcomes);
    return summary;
}

BundleManifest load_manifest(const fs::path& bundle)
{
    json j;
    try {
        j = json::parse(read_file(manifest_path(bundle)));
    } catch (const json::parse_error& e) {
        throw RecordError("manifest: " + std::string(e.what()));
    } catch (const std::runtime_error& e) {
        throw RecordError(std::string("manifest: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kBundleFormatVersion) {
            throw RecordError("manifest: unsupported version");
        }
        BundleManifest m;
        m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        m.alpha = j.at("alpha").get<double>();
        m.stats_metrics = j.at("stats_metrics").get<std::vector<std::string>>();
        for (const auto& e : j.at("engines")) {
            m.engines.push_back({e.at("label").get<std::string>(), engine_config_from_json(e.at("config"))});
        }
        return m;
    } catch (const json::exception& e) {
        throw RecordError(std::string("manifest: ") + e.what());
    } catch (const ConfigError& e) {
        throw RecordError(std::string("manifest: ") + e.what());
    }
}

bool VerifyReport::complete() const
{
    return manifest_ok && missing.empty() && failed.empty() && corrupt.empty() && stale.empty();
}

VerifyReport verify_bundle(const fs::path& bundle)
{
    VerifyReport report;
    BundleManifest m;
    try {
        m = load_manifest(bundle);
        load_instance_file(bundle_instance_path(bundle));
    } catch (const std::exception& e) {
        report.manifest_ok = false;
        report.manifest_error = e.what();
        return report;
    }
    for (const auto& le : m.engines) {
        std::vector<std::pair<std::uint64_t, RunRecord>> loaded;
        for (std::uint64_t seed : m.seeds) {
            const std::string name = job_name(le.label, seed);
            const fs::path rp = run_path(bundle, le.label, seed);
            if (fs::exists(failure_path(bundle, le.label, seed))) {
                report.failed.push_back(name);
                continue;
            }
            if (!fs::exists(rp)) {
                report.missing.push_back(name);
                continue;
            }
            try {
                std::string label;
                RunRecord rec = run_record_from_json(json::parse(read_file(rp)), &label);
                if (label != le.label || rec.seed != seed) {
                    throw RecordError("label or seed does not match its path");
                }
                loaded.emplace_back(seed, std::move(rec));
            } catch (const std::exception&) {
                report.corrupt.push_back(name);
            }
        }
        std::vector<std::pair<std::uint64_t, const RunRecord*>> runs;
        for (const auto& [seed, rec] : loaded) {
            runs.emplace_back(seed, &rec);
        }
        const std::string expected = dump_canonical(label_front_to_json(le.label, combine_label_front(runs)));
        const fs::path fp = front_path(bundle, le.label);
        if (!fs::exists(fp) || read_file(fp) != expected) {
            report.stale.push_back(le.label);
        }
    }
    return report;
}

} // namespace landalloc
