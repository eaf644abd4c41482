#include "landalloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace landalloc {

namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void fill_proportions(const FloorUses& uses, int k, double* out)
{
    std::fill(out, out + k, 0.0);
    const double w = 1.0 / static_cast<double>(uses.size());
    for (UseCode u : uses) {
        out[u] += w;
    }
}

std::string plot_label(std::size_t i) { return "plot " + std::to_string(i); }

} // namespace

Allocation ProblemInstance::actual() const
{
    Allocation a;
    a.floor_uses.reserve(plots.size());
    for (const auto& p : plots) {
        a.floor_uses.push_back(p.actual_uses);
    }
    return a;
}

std::vector<std::size_t> ProblemInstance::unlocked_plots() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < plots.size(); ++i) {
        if (!plots[i].locked) {
            out.push_back(i);
        }
    }
    return out;
}

void ProblemInstance::validate() const
{
    const int k = num_uses();
    const std::size_t n = num_plots();
    if (k < 2 || k > kMaxUses) {
        throw ModelError("number of land uses must be in [2, " + std::to_string(kMaxUses) + "], got " +
                         std::to_string(k));
    }
    for (int m = 0; m < k; ++m) {
        if (uses[m].id != m) {
            throw ModelError("land-use codes must be dense 0..K-1; uses[" + std::to_string(m) + "] has id " +
                             std::to_string(uses[m].id));
        }
    }
    if (compat.rows() != static_cast<std::size_t>(k) || compat.cols() != static_cast<std::size_t>(k)) {
        throw ModelError("compatibility matrix must be K x K");
    }
    if (price.rows() != n || price.cols() != static_cast<std::size_t>(k)) {
        throw ModelError("price matrix must be N x K");
    }
    for (std::size_t l = 0; l < compat.rows(); ++l) {
        for (std::size_t m = 0; m < compat.cols(); ++m) {
            if (!std::isfinite(compat(l, m))) {
                throw ModelError("compatibility entry is not finite");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int m = 0; m < k; ++m) {
            const double v = price(i, m);
            if (!std::isfinite(v) || v < 0.0) {
                throw ModelError("price entry for " + plot_label(i) + " must be finite and non-negative");
            }
        }
    }
    if (!(gamma >= 0.0)) {
        throw ModelError("gamma must be non-negative");
    }
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw ModelError("mu must be in [0, 1]");
    }
    if (!(price_min <= price_max)) {
        throw ModelError("price_min must not exceed price_max");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Plot& p = plots[i];
        if (p.id != static_cast<int>(i)) {
            throw ModelError(plot_label(i) + " has id " + std::to_string(p.id));
        }
        if (p.floor_count < 1) {
            throw ModelError(plot_label(i) + " must have at least one floor");
        }
        if (!(p.floor_space > 0.0) || !std::isfinite(p.floor_space)) {
            throw ModelError(plot_label(i) + " must have positive floor space");
        }
        if (p.actual_uses.size() != static_cast<std::size_t>(p.floor_count)) {
            throw ModelError(plot_label(i) + " actual uses length differs from floor count");
        }
        for (UseCode u : p.actual_uses) {
            if (u >= k) {
                throw ModelError(plot_label(i) + " has out-of-range actual use");
            }
        }
        for (int j : p.neighbors) {
            if (j < 0 || static_cast<std::size_t>(j) >= n) {
                throw ModelError(plot_label(i) + " has dangling neighbor " + std::to_string(j));
            }
            if (static_cast<std::size_t>(j) == i) {
                throw ModelError(plot_label(i) + " lists itself as a neighbor");
            }
        }
    }
}

void validate_allocation(const ProblemInstance& inst, const Allocation& a)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation has " + std::to_string(a.size()) + " plots, instance has " +
                         std::to_string(inst.num_plots()));
    }
    const int k = inst.num_uses();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.floor_uses[i].size() != static_cast<std::size_t>(inst.plots[i].floor_count)) {
            throw ModelError(plot_label(i) + " floor-use vector length differs from floor count");
        }
        for (UseCode u : a.floor_uses[i]) {
            if (u >= k) {
                throw ModelError(plot_label(i) + " has out-of-range use code");
            }
        }
    }
}

std::vector<double> proportions(const Allocation& a, std::size_t plot, int num_uses)
{
    if (plot >= a.size()) {
        throw ModelError("invalid plot id " + std::to_string(plot));
    }
    std::vector<double> out(static_cast<std::size_t>(num_uses));
    for (UseCode u : a.floor_uses[plot]) {
        if (u >= num_uses) {
            throw ModelError(plot_label(plot) + " has out-of-range use code");
        }
    }
    fill_proportions(a.floor_uses[plot], num_uses, out.data());
    return out;
}

double evaluate_compatibility(const ProblemInstance& inst, const Allocation& a)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation size differs from instance");
    }
    const std::size_t n = inst.num_plots();
    const int k = inst.num_uses();
    std::vector<double> x(n * static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        if (a.floor_uses[i].empty()) {
            throw ModelError(plot_label(i) + " has no floors");
        }
        fill_proportions(a.floor_uses[i], k, x.data() + i * k);
    }

    // sum_i F_i x_i^T C (sum_{j in J(i)} F_j x_j)
    CompensatedSum total;
    std::vector<double> neighborhood(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const Plot& p = inst.plots[i];
        if (p.neighbors.empty()) {
            continue;
        }
        std::fill(neighborhood.begin(), neighborhood.end(), 0.0);
        for (int j : p.neighbors) {
            const double fj = inst.plots[j].floor_space;
            const double* xj = x.data() + static_cast<std::size_t>(j) * k;
            for (int m = 0; m < k; ++m) {
                neighborhood[m] += fj * xj[m];
            }
        }
        const double* xi = x.data() + i * k;
        double acc = 0.0;
        for (int l = 0; l < k; ++l) {
            if (xi[l] == 0.0) {
                continue;
            }
            const double* crow = inst.compat.row(l);
            double inner = 0.0;
            for (int m = 0; m < k; ++m) {
                inner += crow[m] * neighborhood[m];
            }
            acc += xi[l] * inner;
        }
        total.add(p.floor_space * acc);
    }
    return total.value();
}

double evaluate_price(const ProblemInstance& inst, const Allocation& a)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation size differs from instance");
    }
    const int k = inst.num_uses();
    CompensatedSum total;
    std::vector<double> x(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < a.size(); ++i) {
        fill_proportions(a.floor_uses[i], k, x.data());
        const double* prow = inst.price.row(i);
        double acc = 0.0;
        for (int m = 0; m < k; ++m) {
            acc += prow[m] * x[m];
        }
        total.add(acc);
    }
    return total.value();
}

ObjectiveVector evaluate(const ProblemInstance& inst, const Allocation& a)
{
    return {evaluate_compatibility(inst, a), evaluate_price(inst, a)};
}

std::vector<double> use_areas(const ProblemInstance& inst, const Allocation& a)
{
    const int k = inst.num_uses();
    std::vector<double> areas(static_cast<std::size_t>(k), 0.0);
    std::vector<double> x(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < a.size(); ++i) {
        fill_proportions(a.floor_uses[i], k, x.data());
        for (int m = 0; m < k; ++m) {
            areas[m] += x[m] * inst.plots[i].floor_space;
        }
    }
    return areas;
}

std::size_t changed_plot_count(const ProblemInstance& inst, const Allocation& a)
{
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.floor_uses[i] != inst.plots[i].actual_uses) {
            ++changed;
        }
    }
    return changed;
}

ConstraintReport check_constraints(const ProblemInstance& inst, const Allocation& a, double gamma, double mu)
{
    return check_constraints(inst, a, gamma, mu, evaluate_price(inst, a));
}

ConstraintReport check_constraints(const ProblemInstance& inst, const Allocation& a, double gamma, double mu,
                                   double price)
{
    if (a.size() != inst.num_plots()) {
        throw ModelError("allocation size differs from instance");
    }
    ConstraintReport r;
    const int k = inst.num_uses();
    std::vector<double> areas(static_cast<std::size_t>(k), 0.0);
    std::vector<double> actual(static_cast<std::size_t>(k), 0.0);
    std::vector<double> x(static_cast<std::size_t>(k));
    double total_space = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Plot& p = inst.plots[i];
        total_space += p.floor_space;
        fill_proportions(a.floor_uses[i], k, x.data());
        for (int m = 0; m < k; ++m) {
            areas[m] += x[m] * p.floor_space;
        }
        fill_proportions(p.actual_uses, k, x.data());
        for (int m = 0; m < k; ++m) {
            actual[m] += x[m] * p.floor_space;
        }
        if (a.floor_uses[i] != p.actual_uses) {
            ++r.changed_plot_count;
        }
    }

    double excess = 0.0;
    for (int m = 0; m < k; ++m) {
        const double lo = (1.0 - gamma) * actual[m];
        const double hi = (1.0 + gamma) * actual[m];
        if (areas[m] < lo) {
            r.area_ok = false;
            excess += lo - areas[m];
        } else if (areas[m] > hi) {
            r.area_ok = false;
            excess += areas[m] - hi;
        }
        double change = 0.0;
        if (actual[m] > 0.0) {
            change = std::abs(areas[m] - actual[m]) / actual[m];
        } else if (areas[m] > 0.0) {
            change = std::numeric_limits<double>::infinity();
        }
        r.max_area_change_fraction = std::max(r.max_area_change_fraction, change);
    }
    r.area_excess = total_space > 0.0 ? excess / total_space : excess;

    const double price_scale = std::max(std::abs(inst.price_max), 1e-12);
    if (price < inst.price_min) {
        r.price_ok = false;
        r.price_excess = (inst.price_min - price) / price_scale;
    } else if (price > inst.price_max) {
        r.price_ok = false;
        r.price_excess = (price - inst.price_max) / price_scale;
    }

    r.plot_budget_ok = static_cast<double>(r.changed_plot_count) <= mu * static_cast<double>(inst.num_plots());
    return r;
}

} // namespace landalloc
