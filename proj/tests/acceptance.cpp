// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/core.h>

#include "landalloc/engines.hpp"
#include "landalloc/experiment.hpp"
#include "landalloc/instance_io.hpp"
#include "landalloc/metrics.hpp"
#include "landalloc/pareto.hpp"
#include "landalloc/records.hpp"
#include "landalloc/report.hpp"
#include "landalloc/stats.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace landalloc;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void emit(int id, const char* title, const Outcome& o)
{
    std::printf("criterion %2d [%s] %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

const std::vector<Algorithm> kEngines = {Algorithm::SOA, Algorithm::MSBX_NSGA2, Algorithm::CR_DES,
                                         Algorithm::MSBX_MO};

// Archive traces collected from every engine run made here.
struct TraceCheck {
    std::size_t runs = 0;
    std::vector<std::string> violations;

    void add(const std::string& name, const RunRecord& rec)
    {
        ++runs;
        for (std::size_t g = 1; g < rec.hv_trace.size(); ++g) {
            if (rec.hv_trace[g] < rec.hv_trace[g - 1]) {
                violations.push_back(fmt::format("{} gen {}", name, g + 1));
                return;
            }
        }
    }
};

TraceCheck traces;

bool is_subset(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& truth)
{
    return std::all_of(front.begin(), front.end(), [&](const ObjectiveVector& p) { return contains_point(truth, p); });
}

Outcome criterion_1()
{
    const auto start = Clock::now();
    Rng rng(20240901);
    RandomInstanceSpec spec;
    spec.max_bits = 16.0;
    const int instances = 20;
    int engine_cases = 0;
    int engine_cases_ok = 0;
    std::string worst;
    for (int t = 0; t < instances; ++t) {
        const ProblemInstance inst = random_instance(rng, spec);
        const auto truth = brute_force_pareto(inst, inst.gamma);
        for (Algorithm alg : kEngines) {
            int ok = 0;
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                EngineConfig cfg;
                cfg.algorithm = alg;
                cfg.population_size = 50;
                cfg.generations = 150;
                cfg.seed = seed;
                const RunRecord rec = run_engine(inst, cfg);
                traces.add(fmt::format("tiny{}/{}/seed-{}", t, to_string(alg), seed), rec);
                ok += is_subset(rec.front_objectives(), truth) ? 1 : 0;
            }
            ++engine_cases;
            if (ok >= 4) {
                ++engine_cases_ok;
            } else if (worst.empty()) {
                worst = fmt::format("; first miss: instance {} ({} plots, {:.1f} bits) {} {}/5", t,
                                    inst.num_plots(), allocation_bits(inst), to_string(alg), ok);
            }
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = engine_cases_ok == engine_cases && elapsed <= 120.0;
    return {pass, fmt::format("{}/{} (instance, engine) cases with front within the enumerated Pareto set for >= 4/5 "
                              "seeds over {} instances, {:.1f}s (limit 120s){}",
                              engine_cases_ok, engine_cases, instances, elapsed, worst)};
}

Outcome criterion_2()
{
    Rng rng(77);
    RandomInstanceSpec spec;
    spec.min_plots = 2;
    spec.max_plots = 10;
    spec.max_uses = 5;
    spec.max_floors = 6;
    spec.edge_probability = 0.5;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const ProblemInstance inst = random_instance(rng, spec);
        const Allocation a = random_allocation(inst, rng);
        const double c = evaluate_compatibility(inst, a);
        const double p = evaluate_price(inst, a);
        const double nc = naive_compatibility(inst, a);
        const double np = naive_price(inst, a);
        worst = std::max(worst, std::abs(c - nc) / std::max(std::abs(nc), 1e-300));
        worst = std::max(worst, std::abs(p - np) / std::max(std::abs(np), 1e-300));
    }
    return {worst <= 1e-9, fmt::format("max relative error {:.3g} over 100 random pairs (limit 1e-9)", worst)};
}

Outcome criterion_3()
{
    std::vector<std::string> bad;
    const double hv1 = hypervolume_2d(std::vector<ObjectiveVector>{{0.5, 0.5}});
    const double hv2 = hypervolume_2d(std::vector<ObjectiveVector>{{1.0, 0.2}, {0.4, 0.8}});
    if (hv1 != 0.25) {
        bad.push_back(fmt::format("hv single = {:.17g}", hv1));
    }
    // 0.8 - 0.2 is not 0.6 in binary, so the exact area of the stored inputs
    // is evaluated in rationals and rounded once.
    using boost::multiprecision::cpp_rational;
    const cpp_rational exact = cpp_rational(1.0) * cpp_rational(0.2) +
                               cpp_rational(0.4) * (cpp_rational(0.8) - cpp_rational(0.2));
    const double hv2_exact = exact.convert_to<double>();
    if (hv2 != hv2_exact || std::abs(hv2 - 0.44) > 1e-15) {
        bad.push_back(fmt::format("hv two-point = {:.17g}, exact {:.17g}", hv2, hv2_exact));
    }
    const std::vector<ObjectiveVector> z{{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}};
    const std::vector<ObjectiveVector> a_sub{{0.5, 0.5}, {0.9, 0.1}};
    if (gd(a_sub, z) != 0.0 || gd_plus(a_sub, z) != 0.0 || igd(z, z) != 0.0 || igd_plus(z, z) != 0.0) {
        bad.push_back("zero cases");
    }
    if (gd(std::vector<ObjectiveVector>{{0, 0}}, std::vector<ObjectiveVector>{{3, 4}}) != 5.0) {
        bad.push_back("gd (0,0)->(3,4) != 5");
    }
    Rng rng(5);
    int order_violations = 0;
    for (int t = 0; t < 1000; ++t) {
        auto draw = [&](std::size_t n) {
            std::vector<ObjectiveVector> v(n);
            for (auto& p : v) {
                p = {rng.uniform01(), rng.uniform01()};
            }
            return v;
        };
        const auto a = draw(1 + rng.below(15));
        const auto r = draw(1 + rng.below(15));
        if (gd_plus(a, r) > gd(a, r) + 1e-15 || igd_plus(r, a) > igd(r, a) + 1e-15) {
            ++order_violations;
        }
    }
    if (order_violations) {
        bad.push_back(fmt::format("{} of 1000 random pairs break gd+ <= gd or igd+ <= igd", order_violations));
    }
    std::string detail = fmt::format("hv = {:.17g} and {:.17g}; gd/igd exact cases; 1000 random ordering checks", hv1, hv2);
    for (const auto& b : bad) {
        detail += "; " + b;
    }
    return {bad.empty(), detail};
}

std::vector<Front> peel_oracle(const std::vector<ObjectiveVector>& pts)
{
    std::vector<Front> fronts;
    std::vector<bool> taken(pts.size(), false);
    std::size_t left = pts.size();
    while (left > 0) {
        Front f;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (taken[i]) {
                continue;
            }
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                dominated = !taken[j] && naive_dominates(pts[j], pts[i]);
            }
            if (!dominated) {
                f.push_back(i);
            }
        }
        for (std::size_t i : f) {
            taken[i] = true;
        }
        left -= f.size();
        fronts.push_back(std::move(f));
    }
    return fronts;
}

Outcome criterion_4()
{
    Rng rng(404);
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<ObjectiveVector> pts(200);
        const bool lattice = t % 2 == 1;  // ties and duplicates on odd clouds
        for (auto& p : pts) {
            p = lattice ? ObjectiveVector{static_cast<double>(rng.below(12)), static_cast<double>(rng.below(12))}
                        : ObjectiveVector{rng.uniform01(), rng.uniform01()};
        }
        auto got = fast_non_dominated_sort(pts);
        for (auto& f : got) {
            std::sort(f.begin(), f.end());
        }
        if (got != peel_oracle(pts)) {
            ++mismatches;
        }
    }
    return {mismatches == 0, fmt::format("{} of 100 random 200-point clouds differ from the O(n^2) oracle", mismatches)};
}

Outcome criterion_5()
{
    const std::vector<stats::SampleGroup> groups{{"a", {1, 2, 3}}, {"b", {4, 5, 6}}};
    const auto kw = stats::kruskal_wallis(groups);
    const bool kw_ok = std::abs(kw.h - 3.857) <= 0.001 && kw.p >= 0.048 && kw.p <= 0.051;

    Rng rng(55);
    int checked = 0;
    int flagged = 0;
    int broken = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t k = 2 + rng.below(9);
        std::vector<std::string> order;
        for (std::size_t i = 0; i < k; ++i) {
            order.push_back("g" + std::to_string(i));
        }
        const double density = rng.uniform01();
        std::vector<stats::PairwiseResult> pairs;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                stats::PairwiseResult p;
                p.first = order[i];
                p.second = order[j];
                p.significant = rng.bernoulli(density);
                pairs.push_back(p);
            }
        }
        const auto cld = stats::compact_letter_display(pairs, order);
        if (cld.flagged) {
            ++flagged;
            continue;
        }
        ++checked;
        // Independent check of the sharing rule.
        for (const auto& p : pairs) {
            const std::string& la = cld.letters.at(p.first);
            const std::string& lb = cld.letters.at(p.second);
            bool share = false;
            for (char c : la) {
                share = share || lb.find(c) != std::string::npos;
            }
            if (share == p.significant || la.empty()) {
                ++broken;
                break;
            }
        }
    }
    return {kw_ok && broken == 0,
            fmt::format("H = {:.4f}, p = {:.4f}; CLD invariant broken in {} of {} matrices ({} flagged, excluded)",
                        kw.h, kw.p, broken, checked, flagged)};
}

ProblemInstance grid_instance(int w, int h)
{
    GeneratorSpec spec;
    spec.grid_width = w;
    spec.grid_height = h;
    spec.seed = 1;
    return generate_synthetic(spec);
}

struct RelaxationRuns {
    std::vector<RunRecord> unrelaxed;
    std::vector<RunRecord> relaxed;
    double seconds = 0.0;
};

RelaxationRuns relaxation_runs(const ProblemInstance& inst)
{
    RelaxationRuns out;
    const auto start = Clock::now();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EngineConfig base;
        base.algorithm = Algorithm::CR_DES;
        base.seed = seed;
        base.relax = RelaxationSchedule::constant(0.3, inst.mu);
        out.unrelaxed.push_back(run_engine(inst, base));
        traces.add(fmt::format("20x20/CR_DES/seed-{}", seed), out.unrelaxed.back());
        EngineConfig relaxed = base;
        relaxed.relax = RelaxationSchedule{0.8, inst.mu, 0.3, inst.mu};
        out.relaxed.push_back(run_engine(inst, relaxed));
        traces.add(fmt::format("20x20/CR_DES_relaxed/seed-{}", seed), out.relaxed.back());
    }
    out.seconds = seconds_since(start);
    return out;
}

Outcome criterion_6(const ProblemInstance& inst, const RelaxationRuns& runs)
{
    std::vector<FrontSet> universe{{"actual", {evaluate(inst, inst.actual())}}};
    for (const auto* group : {&runs.unrelaxed, &runs.relaxed}) {
        for (const auto& rec : *group) {
            universe.push_back({"run", rec.front_objectives()});
        }
    }
    const auto bounds = normalization_bounds(universe);
    auto hvs = [&](const std::vector<RunRecord>& recs) {
        std::vector<double> v;
        for (const auto& rec : recs) {
            v.push_back(hypervolume_2d(normalize(rec.front_objectives(), bounds)));
        }
        return v;
    };
    const auto hu = hvs(runs.unrelaxed);
    const auto hr = hvs(runs.relaxed);
    const double mu = stats::median(hu);
    const double mr = stats::median(hr);
    const bool pass = mr >= mu && runs.seconds <= 600.0;
    return {pass, fmt::format("median final HV relaxed (80%->30%) {:.4f} vs unrelaxed (30%) {:.4f} over 5 seeds on a "
                              "shared normalization, {:.1f}s (limit 600s)",
                              mr, mu, runs.seconds)};
}

Outcome criterion_7(const ProblemInstance& inst, const RelaxationRuns& runs)
{
    for (Algorithm alg : kEngines) {
        if (alg == Algorithm::CR_DES) {
            continue;
        }
        EngineConfig cfg;
        cfg.algorithm = alg;
        cfg.seed = 1;
        traces.add(fmt::format("20x20/{}/seed-1", to_string(alg)), run_engine(inst, cfg));
    }
    std::vector<double> mean(runs.unrelaxed.front().hv_trace.size(), 0.0);
    double worst_run = 0.0;
    for (const auto& rec : runs.unrelaxed) {
        const auto& h = rec.hv_trace;
        for (std::size_t g = 0; g < h.size(); ++g) {
            mean[g] += h[g] / static_cast<double>(runs.unrelaxed.size());
        }
        worst_run = std::max(worst_run, (h.back() - h[h.size() - 51]) / h.back());
    }
    const double change = (mean.back() - mean[mean.size() - 51]) / mean.back();
    const bool monotone = traces.violations.empty();
    const bool plateau = change <= 0.01;
    std::string detail = fmt::format(
        "archive HV non-decreasing in {}/{} runs; CR+DES mean-trace change over the last 50 generations {:.2f}% of "
        "final HV (limit 1%, worst single run {:.2f}%)",
        traces.runs - traces.violations.size(), traces.runs, 100.0 * change, 100.0 * worst_run);
    if (!monotone) {
        detail += "; first decrease: " + traces.violations.front();
    }
    return {monotone && plateau, detail};
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& diff)
{
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (e.is_regular_file() && e.path().string().find(".timing.json") == std::string::npos) {
            files.push_back(fs::relative(e.path(), a));
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        if (!fs::exists(b / f) || read_file(a / f) != read_file(b / f)) {
            diff = f.string();
            return false;
        }
    }
    return !files.empty();
}

Outcome criterion_8()
{
    const fs::path root = fs::temp_directory_path() / "landalloc_acceptance_c8";
    fs::remove_all(root);
    GeneratorSpec spec;
    spec.grid_width = 8;
    spec.grid_height = 6;
    spec.seed = 3;
    const ProblemInstance inst = generate_synthetic(spec);

    ExperimentConfig cfg;
    for (Algorithm alg : kEngines) {
        EngineConfig ec;
        ec.algorithm = alg;
        ec.population_size = 30;
        ec.generations = 30;
        cfg.engines.push_back({to_string(alg), ec});
    }
    cfg.engines.push_back({"CR_DES_relaxed", cfg.engines[2].config});
    cfg.engines.back().config.relax = RelaxationSchedule{0.8, 0.2, 0.3, 0.2};
    cfg.seeds = {1, 2, 3};
    cfg.workers = 2;
    std::string diff;
    cfg.output = root / "a";
    run_experiment(cfg, inst);
    cfg.output = root / "b";
    cfg.workers = 1;
    run_experiment(cfg, inst);
    const bool runs_same = same_tree(root / "a", root / "b", diff);
    std::string report_diff;
    write_report(build_report(root / "a"), root / "report1");
    write_report(build_report(root / "a"), root / "report2");
    const bool reports_same = same_tree(root / "report1", root / "report2", report_diff);
    fs::remove_all(root);
    return {runs_same && reports_same,
            fmt::format("two bundles of 15 runs (2 workers vs 1) {}; regenerated report {}",
                        runs_same ? "byte-identical" : "differ at " + diff,
                        reports_same ? "byte-identical" : "differs at " + report_diff)};
}

Outcome criterion_9(const ProblemInstance& inst, const RelaxationRuns& runs)
{
    std::string counts;
    bool ok = true;
    std::size_t checked = 0;
    for (const auto& rec : runs.relaxed) {
        for (std::size_t i : rec.final_front) {
            const auto c = naive_constraints(inst, rec.final_population[i].allocation, 0.3, inst.mu);
            ok = ok && c.area_ok && c.price_ok;
            ++checked;
        }
        ok = ok && rec.survivors >= 1 && !rec.final_front.empty();
        counts += fmt::format("{}{}", counts.empty() ? "" : ", ", rec.survivors);
    }
    return {ok, fmt::format("{} reported solutions rechecked against gamma = 30% and the price box; survivors per run: "
                            "{} of {}",
                            checked, counts, runs.relaxed.front().config.population_size)};
}

Outcome criterion_10()
{
    const ProblemInstance inst = grid_instance(43, 30);
    EngineConfig cfg;
    cfg.algorithm = Algorithm::CR_DES;
    cfg.seed = 1;
    const auto start = Clock::now();
    const RunRecord rec = run_engine(inst, cfg);
    const double elapsed = seconds_since(start);
    traces.add("43x30/CR_DES/seed-1", rec);
    return {inst.num_plots() == 1290 && elapsed <= 600.0,
            fmt::format("{} plots, population {} x {} generations in {:.1f}s (limit 600s), front size {}",
                        inst.num_plots(), cfg.population_size, cfg.generations, elapsed, rec.final_front.size())};
}

} // namespace

int main()
{
    emit(1, "brute-force Pareto oracle", criterion_1());
    emit(2, "objective oracles", criterion_2());
    emit(3, "indicator analytics", criterion_3());
    emit(4, "sorting oracle", criterion_4());
    emit(5, "statistics", criterion_5());
    const ProblemInstance grid = grid_instance(20, 20);
    const RelaxationRuns runs = relaxation_runs(grid);
    emit(6, "relaxation effect", criterion_6(grid, runs));
    const Outcome c10 = criterion_10();
    emit(7, "convergence shape", criterion_7(grid, runs));
    emit(8, "determinism and persistence", criterion_8());
    emit(9, "unrelaxation filter", criterion_9(grid, runs));
    emit(10, "scale check", c10);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
