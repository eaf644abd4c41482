#include "landalloc/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/core.h>

#include "landalloc/instance_io.hpp"
#include "landalloc/records.hpp"

namespace landalloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v)
{
    if (!std::isfinite(v)) {
        return "NA";
    }
    return fmt::format("{:.10g}", v);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

double pct_delta(double value, double actual)
{
    if (actual == 0.0) {
        return kNaN;
    }
    return 100.0 * (value - actual) / std::abs(actual);
}

bool higher_is_better(const std::string& metric)
{
    return metric == "best_price" || metric == "best_compatibility" || metric == "hv";
}

std::optional<double> metric_value(const RunSummary& run, const std::string& metric)
{
    if (!run.present) {
        return std::nullopt;
    }
    if (metric == "best_price") {
        return run.best_price;
    }
    if (metric == "best_compatibility") {
        return run.best_compatibility;
    }
    if (!run.indicators) {
        return std::nullopt;
    }
    const IndicatorValues& v = *run.indicators;
    if (metric == "hv") {
        return v.hv;
    }
    if (metric == "gd") {
        return v.gd;
    }
    if (metric == "gd_plus") {
        return v.gd_plus;
    }
    if (metric == "igd") {
        return v.igd;
    }
    if (metric == "igd_plus") {
        return v.igd_plus;
    }
    return std::nullopt;
}

std::vector<ObjectiveVector> objectives_of(const std::vector<FrontMember>& front)
{
    std::vector<ObjectiveVector> out;
    out.reserve(front.size());
    for (const auto& m : front) {
        out.push_back(m.objectives);
    }
    return out;
}

MetricComparison compare(const std::vector<LabelSummary>& labels, const std::string& metric, double alpha)
{
    MetricComparison mc;
    mc.metric = metric;
    mc.higher_is_better = higher_is_better(metric);
    std::vector<stats::SampleGroup> groups;
    for (const auto& ls : labels) {
        stats::SampleGroup g{ls.label, {}};
        for (const auto& run : ls.runs) {
            if (auto v = metric_value(run, metric); v && std::isfinite(*v)) {
                g.values.push_back(*v);
            }
        }
        if (!g.values.empty()) {
            groups.push_back(std::move(g));
        }
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> med(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        med[g] = stats::median(groups[g].values);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mc.higher_is_better ? med[a] > med[b] : med[a] < med[b];
    });
    for (std::size_t g : order) {
        mc.labels.push_back(groups[g].label);
        mc.medians.push_back(med[g]);
    }
    if (groups.size() < 2) {
        mc.skipped = "fewer than two labels with values";
        return mc;
    }
    mc.kruskal = stats::kruskal_wallis(groups);
    mc.pairwise = stats::dunn_posthoc(groups, alpha);
    mc.cld = stats::compact_letter_display(mc.pairwise, mc.labels);
    return mc;
}

// Minimal SVG canvas with a linear data-to-pixel map.
struct Plot2D {
    double x0, x1, y0, y1;
    static constexpr double W = 760, H = 520, L = 90, R = 200, T = 40, B = 60;

    double px(double x) const { return L + (x1 == x0 ? 0.5 : (x - x0) / (x1 - x0)) * (W - L - R); }
    double py(double y) const { return T + (1.0 - (y1 == y0 ? 0.5 : (y - y0) / (y1 - y0))) * (H - T - B); }

    std::string frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) const
    {
        std::string s = fmt::format(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
            "font-family=\"sans-serif\" font-size=\"12\">\n",
            W, H);
        s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
        s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                         (L + W - R) / 2, title);
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L,
                         T, W - L - R, H - T - B);
        for (int t = 0; t <= 4; ++t) {
            const double fx = x0 + (x1 - x0) * t / 4.0;
            const double fy = y0 + (y1 - y0) * t / 4.0;
            s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(fx),
                             H - B + 18, fx);
            s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", L - 6,
                             py(fy) + 4, fy);
        }
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2, H - 16,
                         xlabel);
        s += fmt::format(
            "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
            (T + H - B) / 2, ylabel);
        return s;
    }
};

const char* color(std::size_t i)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

} // namespace

std::size_t LabelSummary::present_runs() const
{
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunSummary& r) { return r.present; }));
}

ReportData build_report(const fs::path& bundle, std::optional<double> alpha)
{
    const BundleManifest manifest = load_manifest(bundle);
    const ProblemInstance inst = load_instance_file(bundle_instance_path(bundle));
    ReportData r;
    r.alpha = alpha.value_or(manifest.alpha);
    r.actual = evaluate(inst, inst.actual());
    r.actual_areas = use_areas(inst, inst.actual());
    for (const auto& u : inst.uses) {
        r.use_names.push_back(u.name);
    }

    // Load every run; keep records alive for provenance lookups.
    std::vector<std::vector<std::optional<RunRecord>>> records(manifest.engines.size());
    for (std::size_t e = 0; e < manifest.engines.size(); ++e) {
        const std::string& label = manifest.engines[e].label;
        LabelSummary ls;
        ls.label = label;
        for (std::uint64_t seed : manifest.seeds) {
            RunSummary rs;
            rs.seed = seed;
            std::optional<RunRecord> rec;
            if (fs::exists(failure_path(bundle, label, seed))) {
                rs.status = "failed";
            } else if (!fs::exists(run_path(bundle, label, seed))) {
                rs.status = "missing";
            } else {
                try {
                    std::string stored_label;
                    rec = run_record_from_json(json::parse(read_file(run_path(bundle, label, seed))), &stored_label);
                    if (stored_label != label || rec->seed != seed) {
                        throw RecordError("label or seed mismatch");
                    }
                    for (const auto& ind : rec->final_population) {
                        validate_allocation(inst, ind.allocation);
                    }
                    rs.status = "ok";
                    rs.present = true;
                } catch (const std::exception&) {
                    rec.reset();
                    rs.status = "corrupt";
                }
            }
            if (!rs.present) {
                r.gaps.push_back(label + "/seed-" + std::to_string(seed) + ": " + rs.status);
            } else {
                rs.front_size = rec->final_front.size();
                rs.survivors = rec->survivors;
                rs.hv_trace = rec->hv_trace;
            }
            ls.runs.push_back(std::move(rs));
            records[e].push_back(std::move(rec));
        }
        r.labels.push_back(std::move(ls));
    }

    // Reference set and normalization universe.
    std::vector<FrontSet> run_fronts;
    for (std::size_t e = 0; e < records.size(); ++e) {
        for (const auto& rec : records[e]) {
            if (rec) {
                run_fronts.push_back({r.labels[e].label, rec->front_objectives()});
            }
        }
    }
    r.reference = run_fronts.empty() ? std::vector<ObjectiveVector>{} : combine_fronts(run_fronts).points;
    std::vector<FrontSet> universe = run_fronts;
    universe.push_back({"reference", r.reference});
    universe.push_back({"actual", {r.actual}});
    r.bounds = normalization_bounds(universe);

    for (std::size_t e = 0; e < records.size(); ++e) {
        LabelSummary& ls = r.labels[e];
        std::vector<std::pair<std::uint64_t, const RunRecord*>> present;
        IndicatorValues sum;
        std::size_t counted = 0;
        for (std::size_t s = 0; s < records[e].size(); ++s) {
            const auto& rec = records[e][s];
            if (!rec) {
                continue;
            }
            present.emplace_back(ls.runs[s].seed, &*rec);
            const auto front = rec->front_objectives();
            RunSummary& rs = ls.runs[s];
            if (!front.empty()) {
                rs.indicators = evaluate_indicators(front, r.reference, r.bounds);
                rs.best_price = std::max_element(front.begin(), front.end(), [](const auto& a, const auto& b) {
                                    return a.price < b.price;
                                })->price;
                rs.best_compatibility =
                    std::max_element(front.begin(), front.end(), [](const auto& a, const auto& b) {
                        return a.compatibility < b.compatibility;
                    })->compatibility;
                sum.hv += rs.indicators->hv;
                sum.gd += rs.indicators->gd;
                sum.gd_plus += rs.indicators->gd_plus;
                sum.igd += rs.indicators->igd;
                sum.igd_plus += rs.indicators->igd_plus;
                ++counted;
            } else {
                r.gaps.push_back(ls.label + "/seed-" + std::to_string(rs.seed) + ": empty final front");
            }
        }
        if (counted > 0) {
            const double n = static_cast<double>(counted);
            ls.mean_indicators = IndicatorValues{sum.hv / n, sum.gd / n, sum.gd_plus / n, sum.igd / n, sum.igd_plus / n};
        }

        ls.combined = combine_label_front(present);
        if (ls.combined.empty()) {
            ls.notes.push_back("no solutions: Type I/II/III unavailable");
            continue;
        }
        auto lookup = [&](const FrontMember& m) -> const Allocation& {
            for (const auto& [seed, rec] : present) {
                if (seed == m.seed) {
                    return rec->final_population[m.index].allocation;
                }
            }
            throw RecordError("front member without a run");
        };
        auto make_rep = [&](const std::string& type, const FrontMember& m, double crowding) {
            RepresentativeSolution rep;
            rep.type = type;
            rep.member = m;
            rep.crowding = crowding;
            rep.compatibility_delta_pct = pct_delta(m.objectives.compatibility, r.actual.compatibility);
            rep.price_delta_pct = pct_delta(m.objectives.price, r.actual.price);
            rep.use_areas = use_areas(inst, lookup(m));
            return rep;
        };
        const auto& front = ls.combined;
        const auto best_c = std::max_element(front.begin(), front.end(), [](const auto& a, const auto& b) {
            return std::pair(a.objectives.compatibility, a.objectives.price) <
                   std::pair(b.objectives.compatibility, b.objectives.price);
        });
        const auto best_p = std::max_element(front.begin(), front.end(), [](const auto& a, const auto& b) {
            return std::pair(a.objectives.price, a.objectives.compatibility) <
                   std::pair(b.objectives.price, b.objectives.compatibility);
        });
        ls.representatives.push_back(make_rep("I", *best_c, 0.0));
        ls.representatives.push_back(make_rep("II", *best_p, 0.0));
        const auto objs = objectives_of(front);
        const auto cd = crowding_distance(objs, bounds_of(objs));
        std::optional<std::size_t> best_cd;
        for (std::size_t i = 0; i < cd.size(); ++i) {
            if (std::isfinite(cd[i]) && (!best_cd || cd[i] > cd[*best_cd])) {
                best_cd = i;
            }
        }
        if (best_cd) {
            ls.representatives.push_back(make_rep("III", front[*best_cd], cd[*best_cd]));
        } else {
            ls.notes.push_back("Type III unavailable: combined front has no interior point");
        }
    }

    const std::vector<std::string> metrics =
        manifest.stats_metrics.empty() ? std::vector<std::string>{"best_price", "best_compatibility", "hv", "igd_plus"}
                                       : manifest.stats_metrics;
    for (const auto& m : metrics) {
        r.comparisons.push_back(compare(r.labels, m, r.alpha));
    }
    return r;
}

std::string render_indicator_csv(const ReportData& r)
{
    std::string s = "label,runs_used,runs_expected,hv,gd,gd_plus,igd,igd_plus\n";
    for (const auto& ls : r.labels) {
        std::size_t used = 0;
        for (const auto& run : ls.runs) {
            used += run.indicators ? 1 : 0;
        }
        const auto& m = ls.mean_indicators;
        s += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(ls.label), used, ls.runs.size(),
                         m ? num(m->hv) : "NA", m ? num(m->gd) : "NA", m ? num(m->gd_plus) : "NA",
                         m ? num(m->igd) : "NA", m ? num(m->igd_plus) : "NA");
    }
    return s;
}

std::string render_run_csv(const ReportData& r)
{
    std::string s = "label,seed,status,front_size,survivors,best_compatibility,best_price,hv,gd,gd_plus,igd,igd_plus,"
                    "final_trace_hv\n";
    for (const auto& ls : r.labels) {
        for (const auto& run : ls.runs) {
            const auto& v = run.indicators;
            s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(ls.label), run.seed, run.status,
                             run.present ? std::to_string(run.front_size) : "NA",
                             run.present ? std::to_string(run.survivors) : "NA", num(run.best_compatibility),
                             num(run.best_price), v ? num(v->hv) : "NA", v ? num(v->gd) : "NA",
                             v ? num(v->gd_plus) : "NA", v ? num(v->igd) : "NA", v ? num(v->igd_plus) : "NA",
                             run.hv_trace.empty() ? "NA" : num(run.hv_trace.back()));
        }
    }
    return s;
}

std::string render_solutions_csv(const ReportData& r)
{
    std::string s = "label,type,compatibility,price,compatibility_change_pct,price_change_pct,crowding,seed,index\n";
    s += fmt::format("actual,actual,{},{},0,0,NA,NA,NA\n", num(r.actual.compatibility), num(r.actual.price));
    for (const auto& ls : r.labels) {
        for (const char* type : {"I", "II", "III"}) {
            const auto it = std::find_if(ls.representatives.begin(), ls.representatives.end(),
                                         [&](const auto& rep) { return rep.type == type; });
            if (it == ls.representatives.end()) {
                s += fmt::format("{},{},NA,NA,NA,NA,NA,NA,NA\n", csv_field(ls.label), type);
                continue;
            }
            s += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(ls.label), type,
                             num(it->member.objectives.compatibility), num(it->member.objectives.price),
                             num(it->compatibility_delta_pct), num(it->price_delta_pct),
                             it->type == "III" ? num(it->crowding) : "NA", it->member.seed, it->member.index);
        }
    }
    return s;
}

std::string render_landuse_csv(const ReportData& r)
{
    std::string s = "label,type,use,actual_area,area,change,change_pct\n";
    for (const auto& ls : r.labels) {
        for (const auto& rep : ls.representatives) {
            for (std::size_t m = 0; m < r.use_names.size(); ++m) {
                const double a = r.actual_areas[m];
                const double v = rep.use_areas[m];
                s += fmt::format("{},{},{},{},{},{},{}\n", csv_field(ls.label), rep.type, csv_field(r.use_names[m]),
                                 num(a), num(v), num(v - a), num(pct_delta(v, a)));
            }
        }
    }
    return s;
}

std::string render_kruskal_csv(const ReportData& r)
{
    std::string s = "metric,groups,h,df,p,significant,note\n";
    for (const auto& mc : r.comparisons) {
        if (!mc.kruskal) {
            s += fmt::format("{},{},NA,NA,NA,NA,{}\n", mc.metric, mc.labels.size(), csv_field(mc.skipped));
            continue;
        }
        s += fmt::format("{},{},{},{},{},{},\n", mc.metric, mc.labels.size(), num(mc.kruskal->h), mc.kruskal->df,
                         num(mc.kruskal->p), mc.kruskal->p <= r.alpha ? "yes" : "no");
    }
    return s;
}

std::string render_pairwise_csv(const ReportData& r)
{
    std::string s = "metric,first,second,z,p_raw,p_adjusted,significant\n";
    for (const auto& mc : r.comparisons) {
        for (const auto& p : mc.pairwise) {
            s += fmt::format("{},{},{},{},{},{},{}\n", mc.metric, csv_field(p.first), csv_field(p.second), num(p.z),
                             num(p.p_raw), num(p.p_adjusted), p.significant ? "yes" : "no");
        }
    }
    return s;
}

std::string render_cld_csv(const ReportData& r)
{
    std::string s = "metric,position,label,median,letters,flagged\n";
    for (const auto& mc : r.comparisons) {
        for (std::size_t i = 0; i < mc.labels.size(); ++i) {
            std::string letters = "NA";
            if (mc.cld) {
                letters = mc.cld->letters.at(mc.labels[i]);
            }
            s += fmt::format("{},{},{},{},{},{}\n", mc.metric, i + 1, csv_field(mc.labels[i]), num(mc.medians[i]),
                             letters, mc.cld && mc.cld->flagged ? "yes" : "no");
        }
    }
    return s;
}

std::string render_fronts_svg(const ReportData& r)
{
    std::vector<ObjectiveVector> all{r.actual};
    for (const auto& ls : r.labels) {
        for (const auto& m : ls.combined) {
            all.push_back(m.objectives);
        }
    }
    const ObjectiveBounds b = bounds_of(all);
    const double padx = std::max((b.max.price - b.min.price) * 0.05, 1e-9 * std::max(1.0, std::abs(b.max.price)));
    const double pady = std::max((b.max.compatibility - b.min.compatibility) * 0.05,
                                 1e-9 * std::max(1.0, std::abs(b.max.compatibility)));
    const Plot2D plot{b.min.price - padx, b.max.price + padx, b.min.compatibility - pady,
                      b.max.compatibility + pady};
    std::string s = plot.frame("Combined Pareto fronts per label", "price", "compatibility");
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        for (const auto& m : r.labels[i].combined) {
            s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                             plot.px(m.objectives.price), plot.py(m.objectives.compatibility), color(i));
        }
    }
    const double ax = plot.px(r.actual.price);
    const double ay = plot.py(r.actual.compatibility);
    s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"9\" height=\"9\" fill=\"black\"/>\n", ax - 4.5, ay - 4.5);
    double ly = Plot2D::T + 10;
    const double lx = Plot2D::W - Plot2D::R + 14;
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", lx, ly, color(i));
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 10, ly + 4,
                         xml_escape(r.labels[i].label));
        ly += 18;
    }
    s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"8\" height=\"8\" fill=\"black\"/>\n", lx - 4, ly - 4);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">actual land use</text>\n", lx + 10, ly + 4);
    return s + "</svg>\n";
}

std::string render_convergence_svg(const ReportData& r)
{
    std::size_t gens = 0;
    std::vector<std::vector<double>> means(r.labels.size());
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        std::size_t len = std::numeric_limits<std::size_t>::max();
        std::size_t count = 0;
        for (const auto& run : r.labels[i].runs) {
            if (run.present && !run.hv_trace.empty()) {
                len = std::min(len, run.hv_trace.size());
                ++count;
            }
        }
        if (count == 0) {
            continue;
        }
        means[i].assign(len, 0.0);
        for (const auto& run : r.labels[i].runs) {
            if (run.present && !run.hv_trace.empty()) {
                for (std::size_t g = 0; g < len; ++g) {
                    means[i][g] += run.hv_trace[g] / static_cast<double>(count);
                }
            }
        }
        gens = std::max(gens, len);
    }
    const Plot2D plot{1.0, static_cast<double>(std::max<std::size_t>(gens, 2)), 0.0, 1.0};
    std::string s = plot.frame("Mean archive hypervolume per generation", "generation", "hypervolume");
    double ly = Plot2D::T + 10;
    const double lx = Plot2D::W - Plot2D::R + 14;
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        if (!means[i].empty()) {
            std::string pts;
            for (std::size_t g = 0; g < means[i].size(); ++g) {
                pts += fmt::format("{}{:.2f},{:.2f}", g ? " " : "", plot.px(static_cast<double>(g + 1)),
                                   plot.py(means[i][g]));
            }
            s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
                             color(i), pts);
        }
        s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                         "stroke-width=\"3\"/>\n",
                         lx - 6, ly, lx + 4, ly, color(i));
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}{}</text>\n", lx + 10, ly + 4,
                         xml_escape(r.labels[i].label), means[i].empty() ? " (no runs)" : "");
        ly += 18;
    }
    return s + "</svg>\n";
}

std::string render_summary(const ReportData& r)
{
    std::string s = "# Experiment report\n\n";
    s += fmt::format("Actual land use: compatibility {}, price {}\n\n", num(r.actual.compatibility),
                     num(r.actual.price));
    s += fmt::format("Reference set: combined non-dominated front of every run of every label ({} points).\n",
                     r.reference.size());
    s += fmt::format("Normalization bounds: compatibility [{}, {}], price [{}, {}] over all run fronts, the "
                     "reference set and the actual land use.\n",
                     num(r.bounds.min.compatibility), num(r.bounds.max.compatibility), num(r.bounds.min.price),
                     num(r.bounds.max.price));
    s += fmt::format("Significance level: {}\n\n", num(r.alpha));

    s += "## Runs\n\n";
    for (const auto& ls : r.labels) {
        std::string survivors;
        for (const auto& run : ls.runs) {
            if (run.present) {
                survivors += fmt::format("{}seed {}: {}", survivors.empty() ? "" : ", ", run.seed, run.survivors);
            }
        }
        s += fmt::format("- {}: {}/{} runs present; final-constraint survivors per run: {}\n", ls.label,
                         ls.present_runs(), ls.runs.size(), survivors.empty() ? "none" : survivors);
        for (const auto& note : ls.notes) {
            s += fmt::format("  - {}\n", note);
        }
    }
    s += "\n## Gaps\n\n";
    if (r.gaps.empty()) {
        s += "None.\n";
    }
    for (const auto& g : r.gaps) {
        s += "- " + g + "\n";
    }
    s += "\n## Rank tests\n\n";
    for (const auto& mc : r.comparisons) {
        if (!mc.kruskal) {
            s += fmt::format("- {}: skipped ({})\n", mc.metric, mc.skipped);
            continue;
        }
        std::string letters;
        for (std::size_t i = 0; i < mc.labels.size(); ++i) {
            letters += fmt::format("{}{}={}", i ? ", " : "", mc.labels[i], mc.cld->letters.at(mc.labels[i]));
        }
        s += fmt::format("- {}: Kruskal-Wallis H = {}, df = {}, p = {}; letters {}{}\n", mc.metric,
                         num(mc.kruskal->h), mc.kruskal->df, num(mc.kruskal->p), letters,
                         mc.cld->flagged ? " (flagged)" : "");
    }
    s += "\nFiles: indicators.csv, runs.csv, solutions.csv, landuse_change.csv, kruskal.csv, pairwise.csv, cld.csv, "
         "fronts.svg, convergence.svg\n";
    return s;
}

void write_report(const ReportData& r, const fs::path& dir)
{
    fs::create_directories(dir);
    write_file_atomic(dir / "indicators.csv", render_indicator_csv(r));
    write_file_atomic(dir / "runs.csv", render_run_csv(r));
    write_file_atomic(dir / "solutions.csv", render_solutions_csv(r));
    write_file_atomic(dir / "landuse_change.csv", render_landuse_csv(r));
    write_file_atomic(dir / "kruskal.csv", render_kruskal_csv(r));
    write_file_atomic(dir / "pairwise.csv", render_pairwise_csv(r));
    write_file_atomic(dir / "cld.csv", render_cld_csv(r));
    write_file_atomic(dir / "fronts.svg", render_fronts_svg(r));
    write_file_atomic(dir / "convergence.svg", render_convergence_svg(r));
    write_file_atomic(dir / "summary.md", render_summary(r));
}

} // namespace landalloc
