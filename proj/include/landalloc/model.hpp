#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace landalloc {

using UseCode = std::uint8_t;
using FloorUses = std::vector<UseCode>;

// Upper bound on the number of land-use categories; codes are written as
// single base-36 digits in run records.
inline constexpr int kMaxUses = 36;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LandUse {
    int id = 0;
    std::string name;
};

struct Plot {
    int id = 0;
    int floor_count = 1;
    double floor_space = 1.0;
    std::vector<int> neighbors;
    bool locked = false;
    FloorUses actual_uses;
};

// Dense row-major matrix of reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Per-plot floor-use vectors. Proportions x_{i,m} are induced by counting
// floors, so each plot's proportions sum to one by construction.
struct Allocation {
    std::vector<FloorUses> floor_uses;

    std::size_t size() const { return floor_uses.size(); }
    bool operator==(const Allocation&) const = default;
};

struct ObjectiveVector {
    double compatibility = 0.0;
    double price = 0.0;

    bool operator==(const ObjectiveVector&) const = default;
};

struct ProblemInstance {
    std::vector<Plot> plots;
    std::vector<LandUse> uses;
    Matrix compat;  // K x K
    Matrix price;   // N x K, price of plot i fully devoted to use m
    double gamma = 0.3;
    double mu = 0.2;
    double price_min = 0.0;
    double price_max = 0.0;

    std::size_t num_plots() const { return plots.size(); }
    int num_uses() const { return static_cast<int>(uses.size()); }

    Allocation actual() const;
    std::vector<std::size_t> unlocked_plots() const;

    // Throws ModelError naming the first violated invariant.
    void validate() const;
};

struct ConstraintReport {
    bool area_ok = true;
    bool price_ok = true;
    std::size_t changed_plot_count = 0;
    bool plot_budget_ok = true;
    // Largest |area_m - actual_m| / actual_m over uses (0 when actual_m = 0
    // and area_m = 0, +inf when only actual_m = 0).
    double max_area_change_fraction = 0.0;
    // Distance outside the area band, summed over uses, over total floor space.
    double area_excess = 0.0;
    // Distance outside [price_min, price_max] over the width scale of the box.
    double price_excess = 0.0;

    bool feasible() const { return area_ok && price_ok; }
    double violation() const { return area_excess + price_excess; }
};

// Throws ModelError on any length or code-range mismatch.
void validate_allocation(const ProblemInstance& inst, const Allocation& a);

std::vector<double> proportions(const Allocation& a, std::size_t plot, int num_uses);

double evaluate_compatibility(const ProblemInstance& inst, const Allocation& a);
double evaluate_price(const ProblemInstance& inst, const Allocation& a);
ObjectiveVector evaluate(const ProblemInstance& inst, const Allocation& a);

// Total floor area per use, sum_i x_{i,m} * F_i.
std::vector<double> use_areas(const ProblemInstance& inst, const Allocation& a);

std::size_t changed_plot_count(const ProblemInstance& inst, const Allocation& a);

ConstraintReport check_constraints(const ProblemInstance& inst, const Allocation& a, double gamma, double mu);

// Same, reusing an already evaluated price.
ConstraintReport check_constraints(const ProblemInstance& inst, const Allocation& a, double gamma, double mu,
                                   double price);

} // namespace landalloc
