#include "landalloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace landalloc::stats {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 10000;

// Lower regularized gamma by series, valid for x < a + 1.
double gamma_p_series(double a, double x)
{
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz continued fraction, valid for x >= a + 1.
double gamma_q_fraction(double a, double x)
{
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

struct Pooled {
    std::vector<double> values;
    std::vector<std::size_t> group;
};

Pooled pool(std::span<const SampleGroup> groups)
{
    Pooled p;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (double v : groups[g].values) {
            p.values.push_back(v);
            p.group.push_back(g);
        }
    }
    return p;
}

void check_groups(std::span<const SampleGroup> groups)
{
    if (groups.size() < 2) {
        throw std::invalid_argument("rank tests need at least two groups");
    }
    for (const auto& g : groups) {
        if (g.values.empty()) {
            throw std::invalid_argument("group '" + g.label + "' is empty");
        }
        for (double v : g.values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("group '" + g.label + "' has a non-finite value");
            }
        }
    }
}

std::string letter_name(std::size_t index)
{
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    return std::string(1, alphabet[index]);
}

} // namespace

std::vector<double> midranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = mid;
        }
        i = j + 1;
    }
    return ranks;
}

double tie_sum(std::span<const double> values)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        total += t * t * t - t;
        i = j;
    }
    return total;
}

double gamma_q(double a, double x)
{
    if (!(a > 0.0) || x < 0.0) {
        throw std::domain_error("gamma_q needs a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x);
    }
    return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, double df)
{
    if (x <= 0.0) {
        return 1.0;
    }
    return std::clamp(gamma_q(0.5 * df, 0.5 * x), 0.0, 1.0);
}

double two_sided_normal_p(double z) { return std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0, 1.0); }

KruskalWallisResult kruskal_wallis(std::span<const SampleGroup> groups)
{
    check_groups(groups);
    const Pooled pooled = pool(groups);
    const auto ranks = midranks(pooled.values);
    const auto n = static_cast<double>(pooled.values.size());

    std::vector<double> rank_sum(groups.size(), 0.0);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        rank_sum[pooled.group[i]] += ranks[i];
    }
    double s = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        s += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].values.size());
    }

    KruskalWallisResult r;
    r.df = groups.size() - 1;
    const double divisor = 1.0 - tie_sum(pooled.values) / (n * n * n - n);
    if (!(divisor > 0.0)) {
        return r;
    }
    const double h = (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / divisor;
    r.h = std::max(h, 0.0);
    r.p = chi_square_sf(r.h, static_cast<double>(r.df));
    return r;
}

std::vector<PairwiseResult> dunn_posthoc(std::span<const SampleGroup> groups, double alpha)
{
    std::vector<PairwiseResult> out;
    if (groups.size() < 2) {
        return out;
    }
    check_groups(groups);
    const Pooled pooled = pool(groups);
    const auto ranks = midranks(pooled.values);
    const auto n = static_cast<double>(pooled.values.size());
    std::vector<double> mean_rank(groups.size(), 0.0);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        mean_rank[pooled.group[i]] += ranks[i];
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        mean_rank[g] /= static_cast<double>(groups[g].values.size());
    }
    const double variance_base = n * (n + 1.0) / 12.0 - tie_sum(pooled.values) / (12.0 * (n - 1.0));
    const double pairs = static_cast<double>(groups.size() * (groups.size() - 1) / 2);

    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            PairwiseResult r;
            r.first = groups[i].label;
            r.second = groups[j].label;
            const double var = variance_base * (1.0 / static_cast<double>(groups[i].values.size()) +
                                                1.0 / static_cast<double>(groups[j].values.size()));
            if (var > 0.0) {
                r.z = (mean_rank[i] - mean_rank[j]) / std::sqrt(var);
                r.p_raw = two_sided_normal_p(r.z);
            }
            r.p_adjusted = std::min(1.0, r.p_raw * pairs);
            r.significant = r.p_adjusted <= alpha;
            out.push_back(r);
        }
    }
    return out;
}

CldAssignment compact_letter_display(std::span<const PairwiseResult> pairwise, std::span<const std::string> order)
{
    CldAssignment cld;
    cld.order.assign(order.begin(), order.end());
    const std::size_t k = order.size();
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < k; ++i) {
        position[order[i]] = i;
    }

    // significant[i][j], with -1 meaning no entry seen.
    std::vector<std::vector<int>> sig(k, std::vector<int>(k, -1));
    for (const auto& r : pairwise) {
        const auto a = position.find(r.first);
        const auto b = position.find(r.second);
        if (a == position.end() || b == position.end() || a->second == b->second) {
            cld.flagged = true;
            continue;
        }
        int& cell = sig[a->second][b->second];
        const int value = r.significant ? 1 : 0;
        if (cell != -1 && cell != value) {
            cld.flagged = true;
        }
        cell = std::max(cell, value);
        sig[b->second][a->second] = cell;
    }

    using Group = std::set<std::size_t>;
    std::vector<Group> groups;
    if (k > 0) {
        Group all;
        for (std::size_t i = 0; i < k; ++i) {
            all.insert(i);
        }
        groups.push_back(all);
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (sig[i][j] == -1) {
                cld.flagged = true;
                continue;
            }
            if (sig[i][j] != 1) {
                continue;
            }
            // Insert: split every group holding both members.
            std::vector<Group> next;
            for (const Group& g : groups) {
                if (g.count(i) && g.count(j)) {
                    Group without_i = g;
                    without_i.erase(i);
                    Group without_j = g;
                    without_j.erase(j);
                    next.push_back(std::move(without_i));
                    next.push_back(std::move(without_j));
                } else {
                    next.push_back(g);
                }
            }
            // Absorb: drop duplicates and groups contained in another group.
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            groups.clear();
            for (std::size_t a = 0; a < next.size(); ++a) {
                bool absorbed = false;
                for (std::size_t b = 0; b < next.size() && !absorbed; ++b) {
                    absorbed = a != b && next[a].size() < next[b].size() &&
                               std::includes(next[b].begin(), next[b].end(), next[a].begin(), next[a].end());
                }
                if (!absorbed) {
                    groups.push_back(next[a]);
                }
            }
        }
    }

    // Letters follow the best-ranked member of each group.
    std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    constexpr std::size_t alphabet_size = 52;
    if (groups.size() > alphabet_size) {
        cld.flagged = true;
        groups.resize(alphabet_size);
    }
    for (const auto& label : order) {
        cld.letters[label] = "";
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t member : groups[g]) {
            cld.letters[order[member]] += letter_name(g);
        }
    }
    return cld;
}

bool cld_consistent(const CldAssignment& cld, std::span<const PairwiseResult> pairwise)
{
    for (const auto& r : pairwise) {
        const auto a = cld.letters.find(r.first);
        const auto b = cld.letters.find(r.second);
        if (a == cld.letters.end() || b == cld.letters.end()) {
            return false;
        }
        const bool share = a->second.find_first_of(b->second) != std::string::npos;
        if (share == r.significant) {
            return false;
        }
    }
    return true;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace landalloc::stats
