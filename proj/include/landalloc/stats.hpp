#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace landalloc::stats {

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct KruskalWallisResult {
    double h = 0.0;
    std::size_t df = 0;
    double p = 1.0;
};

struct PairwiseResult {
    std::string first;
    std::string second;
    double z = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct CldAssignment {
    std::vector<std::string> order;               // labels, best first
    std::map<std::string, std::string> letters;   // label -> e.g. "ab"
    // Set when the pairwise list was incomplete or contradictory, or the
    // letter alphabet ran out; letters are then best effort.
    bool flagged = false;
};

// Mid-ranks (1-based) of the pooled values.
std::vector<double> midranks(std::span<const double> values);

// Sum over tie groups of t^3 - t.
double tie_sum(std::span<const double> values);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

double chi_square_sf(double x, double df);

// Two-sided standard normal tail, P(|Z| >= |z|).
double two_sided_normal_p(double z);

// Throws std::invalid_argument with fewer than two groups or an empty group.
KruskalWallisResult kruskal_wallis(std::span<const SampleGroup> groups);

// Dunn z-tests on mean ranks with Bonferroni over k(k-1)/2 pairs.
std::vector<PairwiseResult> dunn_posthoc(std::span<const SampleGroup> groups, double alpha = 0.05);

// Insert-and-absorb letter display. `order` lists every label, best first.
CldAssignment compact_letter_display(std::span<const PairwiseResult> pairwise, std::span<const std::string> order);

// True when sharing a letter is equivalent to a non-significant pair.
bool cld_consistent(const CldAssignment& cld, std::span<const PairwiseResult> pairwise);

double median(std::vector<double> values);

} // namespace landalloc::stats
