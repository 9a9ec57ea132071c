#pragma once

#include <vector>

#include "menumech/core.hpp"

namespace menumech {

// Finite set of contracts with distinct allocations, sorted ascending.
// Always contains the outside option (0, 0).
class FiniteMenu {
public:
    // Validates: (0,0) present, allocations strictly increasing in [0,1],
    // payments nonnegative. Input is sorted; duplicate allocations rejected.
    static FiniteMenu from_options(std::vector<Contract> options);
    // Same, but inserts (0,0) if absent.
    static FiniteMenu with_outside_option(std::vector<Contract> options);

    const std::vector<Contract>& options() const { return options_; }
    int size() const { return static_cast<int>(options_.size()); }
    const Contract& option(int i) const { return options_[static_cast<std::size_t>(i)]; }

    // Utility-maximizing option index for type v; ties go to the larger
    // allocation, then the larger payment.
    int best_option(double v, double tie_tol = 1e-12) const;

private:
    explicit FiniteMenu(std::vector<Contract> options) : options_(std::move(options)) {}
    std::vector<Contract> options_;
};

// Contract curve p(a) = a^2/2 + c1*a + c2 on [lo_allocation, 1], pinned to a
// candidate value interval [lo_value, hi_value] by its endpoint slopes and a
// zero-surplus condition at the low end.
class QuadraticMenu {
public:
    QuadraticMenu(double lo_value, double hi_value);

    double lo_value() const { return lo_v_; }
    double hi_value() const { return hi_v_; }
    double lo_allocation() const { return lo_a_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

    // Price of allocation a; domain error outside [lo_allocation, 1].
    double price(double a) const;
    // p'(a) = a + c1. No domain restriction.
    double slope(double a) const { return a + c1_; }

    // argmax of v*a - p(a) over [lo_allocation, 1].
    double myopic_best_response(double v) const;
    // v*a - p(a) for a in the domain.
    double buyer_utility(double v, double a) const { return v * a - price(a); }
    double max_buyer_utility(double v) const;

    FiniteMenu discretize(int grid_size) const;

private:
    double lo_v_, hi_v_, lo_a_, c1_, c2_;
};

inline QuadraticMenu build_quadratic_menu(double lo_value, double hi_value) {
    return QuadraticMenu(lo_value, hi_value);
}

inline double menu_price(const QuadraticMenu& menu, double a) { return menu.price(a); }

inline double myopic_best_response(const QuadraticMenu& menu, double v) {
    return menu.myopic_best_response(v);
}

inline FiniteMenu discretize(const QuadraticMenu& menu, int grid_size) {
    return menu.discretize(grid_size);
}

}  // namespace menumech
