#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "landalloc/experiment.hpp"
#include "landalloc/instance_io.hpp"
#include "landalloc/records.hpp"
#include "landalloc/report.hpp"

namespace fs = std::filesystem;
using namespace landalloc;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kRunFailure = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_pair(const std::string& text, const std::regex& re, const char* what)
{
    std::smatch m;
    if (!std::regex_match(text, m, re)) {
        throw UsageError(std::string("invalid ") + what + " '" + text + "'");
    }
    try {
        return {std::stoi(m[1]), std::stoi(m[2])};
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + " '" + text + "' is out of range");
    }
}

struct GenerateArgs {
    std::string spec_file;
    std::string grid;
    std::optional<int> uses;
    std::string floors;
    std::optional<double> locked;
    std::optional<double> gamma;
    std::optional<double> mu;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_generate(const GenerateArgs& a)
{
    GeneratorSpec spec;
    if (!a.spec_file.empty()) {
        try {
            spec = generator_spec_from_json(nlohmann::json::parse(read_file(a.spec_file)));
        } catch (const std::exception& e) {
            std::cerr << "error: generator spec " << a.spec_file << ": " << e.what() << "\n";
            return kValidation;
        }
    }
    if (!a.grid.empty()) {
        const auto [w, h] = parse_pair(a.grid, std::regex(R"((\d+)x(\d+))"), "grid");
        if (w < 1 || h < 1) {
            throw UsageError("grid dimensions must be positive, got '" + a.grid + "'");
        }
        spec.grid_width = w;
        spec.grid_height = h;
    }
    if (!a.floors.empty()) {
        std::tie(spec.floor_min, spec.floor_max) = parse_pair(a.floors, std::regex(R"((\d+)-(\d+))"), "floor range");
    }
    if (a.uses) {
        spec.uses = *a.uses;
    }
    if (a.locked) {
        spec.locked_fraction = *a.locked;
    }
    if (a.gamma) {
        spec.gamma = *a.gamma;
    }
    if (a.mu) {
        spec.mu = *a.mu;
    }
    if (a.seed) {
        spec.seed = *a.seed;
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::string text = save_instance(generate_synthetic(spec));
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        write_file_atomic(a.out, text);
        std::cerr << "wrote " << a.out << " (" << spec.grid_width * spec.grid_height << " plots)\n";
    }
    return kOk;
}

struct RunArgs {
    std::string config;
    std::string instance;
    std::string out;
    std::string seeds;
    std::optional<std::size_t> workers;
};

int cmd_run(const RunArgs& a)
{
    ExperimentConfig cfg;
    ProblemInstance inst;
    try {
        cfg = load_experiment_config(a.config);
        if (!a.instance.empty()) {
            cfg.instance = a.instance;
        }
        if (!a.out.empty()) {
            cfg.output = a.out;
        }
        if (!a.seeds.empty()) {
            cfg.seeds = parse_seed_list(a.seeds);
        }
        if (a.workers) {
            cfg.workers = *a.workers;
        }
        if (cfg.workers == 0) {
            cfg.workers = default_worker_count();
        }
        cfg.validate();
        if (cfg.instance.empty()) {
            throw ConfigError("no instance given (config 'instance' or --instance)");
        }
        if (cfg.output.empty()) {
            throw ConfigError("no output directory given (config 'output' or --out)");
        }
        inst = load_instance_file(cfg.instance);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    std::cerr << "running " << cfg.engines.size() << " engine(s) x " << cfg.seeds.size() << " seed(s) on "
              << cfg.workers << " worker(s)\n";
    const ExperimentSummary summary = run_experiment(cfg, inst);
    for (const auto& r : summary.runs) {
        if (!r.ok) {
            std::cerr << "run " << r.label << "/seed-" << r.seed << " failed: " << r.error << "\n";
        }
    }
    std::cerr << summary.runs.size() - summary.failed() << "/" << summary.runs.size() << " runs written to "
              << cfg.output.string() << "\n";
    return summary.failed() == 0 ? kOk : kRunFailure;
}

int cmd_report(const std::string& bundle, const std::string& out, std::optional<double> alpha)
{
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) {
        throw UsageError("--alpha must be in (0, 1)");
    }
    ReportData data;
    try {
        data = build_report(bundle, alpha);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    const fs::path dir = out.empty() ? fs::path(bundle) / "report" : fs::path(out);
    write_report(data, dir);
    for (const auto& g : data.gaps) {
        std::cerr << "gap: " << g << "\n";
    }
    std::cerr << "report written to " << dir.string() << "\n";
    return kOk;
}

int cmd_verify(const std::string& bundle)
{
    const VerifyReport v = verify_bundle(bundle);
    if (!v.manifest_ok) {
        std::cerr << "error: " << v.manifest_error << "\n";
        return kValidation;
    }
    for (const auto& s : v.missing) {
        std::cout << "missing " << s << "\n";
    }
    for (const auto& s : v.failed) {
        std::cout << "failed " << s << "\n";
    }
    for (const auto& s : v.corrupt) {
        std::cout << "corrupt " << s << "\n";
    }
    for (const auto& s : v.stale) {
        std::cout << "stale-front " << s << "\n";
    }
    if (v.complete()) {
        std::cout << "complete\n";
        return kOk;
    }
    std::cout << "incomplete\n";
    return kRunFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-objective land-use allocation: instance generation, batch runs and reports"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a synthetic grid instance");
    g->add_option("--spec", gen.spec_file, "Generator spec as a JSON document; flags override its fields");
    g->add_option("--grid", gen.grid, "Grid size WxH (default 20x20)");
    g->add_option("--uses", gen.uses, "Number of land-use categories (default 3)");
    g->add_option("--floors", gen.floors, "Floor count range MIN-MAX (default 1-6)");
    g->add_option("--locked", gen.locked, "Fraction of locked plots (default 0.05)");
    g->add_option("--gamma", gen.gamma, "Area-change fraction stored in the instance (default 0.3)");
    g->add_option("--mu", gen.mu, "Plot-change fraction stored in the instance (default 0.2)");
    g->add_option("--seed", gen.seed, "Generator seed (default 1)");
    g->add_option("--out", gen.out, "Output file, '-' for stdout");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Execute every (engine, seed) job of an experiment");
    r->add_option("--config", run.config, "Experiment config JSON")->required();
    r->add_option("--instance", run.instance, "Override the config's instance path");
    r->add_option("--out", run.out, "Override the config's output directory");
    r->add_option("--seeds", run.seeds, "Seed count N (seeds 1..N) or a comma-separated list");
    r->add_option("--workers", run.workers, "Worker threads (default LANDALLOC_WORKERS or the core count)");

    std::string report_bundle;
    std::string report_out;
    std::optional<double> alpha;
    auto* rep = app.add_subcommand("report", "Indicator tables, rank tests and figures from a results bundle");
    rep->add_option("bundle", report_bundle, "Results bundle directory")->required();
    rep->add_option("--out", report_out, "Report directory (default <bundle>/report)");
    rep->add_option("--alpha", alpha, "Significance level (default from the bundle)");

    std::string verify_dir;
    auto* ver = app.add_subcommand("verify", "Check a results bundle for missing, failed or corrupt runs");
    ver->add_option("bundle", verify_dir, "Results bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*g) {
            return cmd_generate(gen);
        }
        if (*r) {
            return cmd_run(run);
        }
        if (*rep) {
            return cmd_report(report_bundle, report_out, alpha);
        }
        return cmd_verify(verify_dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRunFailure;
    }
}
