#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "landalloc/experiment.hpp"
#include "landalloc/metrics.hpp"
#include "landalloc/stats.hpp"

namespace landalloc {

struct RunSummary {
    std::uint64_t seed = 0;
    bool present = false;  // false: the run is missing, failed or unreadable
    std::string status;    // "ok", "missing", "failed", "corrupt"
    std::size_t front_size = 0;
    std::size_t survivors = 0;
    std::optional<IndicatorValues> indicators;
    std::optional<double> best_price;
    std::optional<double> best_compatibility;
    std::vector<double> hv_trace;
};

struct RepresentativeSolution {
    std::string type;  // "I", "II", "III"
    FrontMember member;
    double crowding = 0.0;  // Type III only
    double compatibility_delta_pct = 0.0;
    double price_delta_pct = 0.0;
    std::vector<double> use_areas;
};

struct LabelSummary {
    std::string label;
    std::vector<RunSummary> runs;  // manifest seed order
    std::vector<FrontMember> combined;
    std::optional<IndicatorValues> mean_indicators;
    std::vector<RepresentativeSolution> representatives;
    std::vector<std::string> notes;  // e.g. why Type III is not available

    std::size_t present_runs() const;
};

struct MetricComparison {
    std::string metric;
    bool higher_is_better = true;
    std::vector<std::string> labels;    // groups that had values, best median first
    std::vector<double> medians;        // same order
    std::optional<stats::KruskalWallisResult> kruskal;
    std::vector<stats::PairwiseResult> pairwise;
    std::optional<stats::CldAssignment> cld;
    std::string skipped;  // non-empty when the tests could not run
};

struct ReportData {
    double alpha = 0.05;
    ObjectiveVector actual;
    std::vector<double> actual_areas;
    std::vector<std::string> use_names;
    NormalizationBounds bounds;
    std::vector<ObjectiveVector> reference;  // combined over every label and run
    std::vector<LabelSummary> labels;
    std::vector<MetricComparison> comparisons;
    std::vector<std::string> gaps;
};

// Reads only the bundle; `alpha` overrides the manifest value.
ReportData build_report(const std::filesystem::path& bundle, std::optional<double> alpha = std::nullopt);

std::string render_indicator_csv(const ReportData& r);
std::string render_run_csv(const ReportData& r);
std::string render_solutions_csv(const ReportData& r);
std::string render_landuse_csv(const ReportData& r);
std::string render_kruskal_csv(const ReportData& r);
std::string render_pairwise_csv(const ReportData& r);
std::string render_cld_csv(const ReportData& r);
std::string render_fronts_svg(const ReportData& r);
std::string render_convergence_svg(const ReportData& r);
std::string render_summary(const ReportData& r);

// Writes every rendering into `dir` (default: <bundle>/report).
void write_report(const ReportData& r, const std::filesystem::path& dir);

} // namespace landalloc
