#include "menumech/menus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace menumech {

FiniteMenu FiniteMenu::from_options(std::vector<Contract> options) {
    std::sort(options.begin(), options.end(), [](const Contract& a, const Contract& b) {
        return a.allocation < b.allocation;
    });
    if (options.empty()) throw std::invalid_argument("menu must be nonempty");
    if (!options.front().is_outside_option())
        throw std::invalid_argument("menu must contain the outside option (0, 0)");
    for (std::size_t i = 0; i < options.size(); ++i) {
        const Contract& c = options[i];
        if (c.allocation < 0.0 || c.allocation > 1.0)
            throw std::invalid_argument("allocation outside [0, 1]");
        if (c.payment < 0.0) throw std::invalid_argument("negative payment");
        if (i > 0 && !(c.allocation > options[i - 1].allocation))
            throw std::invalid_argument("allocations must be distinct");
    }
    return FiniteMenu(std::move(options));
}

FiniteMenu FiniteMenu::with_outside_option(std::vector<Contract> options) {
    bool has = std::any_of(options.begin(), options.end(),
                           [](const Contract& c) { return c.is_outside_option(); });
    if (!has) options.push_back(Contract{0.0, 0.0});
    return from_options(std::move(options));
}

int FiniteMenu::best_option(double v, double tie_tol) const {
    int best = 0;
    double best_u = v * options_[0].allocation - options_[0].payment;
    for (int i = 1; i < size(); ++i) {
        const Contract& c = options_[static_cast<std::size_t>(i)];
        double u = v * c.allocation - c.payment;
        // Options are sorted ascending by allocation, so on a tie the later
        // (larger-allocation) option wins.
        if (u >= best_u - tie_tol) {
            if (u > best_u) best_u = u;
            best = i;
        }
    }
    return best;
}

QuadraticMenu::QuadraticMenu(double lo_value, double hi_value) : lo_v_(lo_value), hi_v_(hi_value) {
    if (!(lo_value < hi_value)) throw std::invalid_argument("degenerate value interval");
    if (lo_value < 0.0 || hi_value > 1.0)
        throw std::invalid_argument("value interval must lie in [0, 1]");
    c1_ = hi_v_ - 1.0;
    lo_a_ = 1.0 - (hi_v_ - lo_v_);
    c2_ = lo_a_ * lo_v_ - lo_a_ * lo_a_ / 2.0 - c1_ * lo_a_;
}

double QuadraticMenu::price(double a) const {
    if (a < lo_a_ - 1e-12 || a > 1.0 + 1e-12)
        throw std::domain_error("allocation outside menu domain");
    return a * a / 2.0 + c1_ * a + c2_;
}

double QuadraticMenu::myopic_best_response(double v) const {
    return std::clamp(v - c1_, lo_a_, 1.0);
}

double QuadraticMenu::max_buyer_utility(double v) const {
    return buyer_utility(v, myopic_best_response(v));
}

FiniteMenu QuadraticMenu::discretize(int grid_size) const {
    if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
    std::vector<Contract> options;
    options.reserve(static_cast<std::size_t>(grid_size) + 1);
    options.push_back(Contract{0.0, 0.0});
    for (int i = 0; i < grid_size; ++i) {
        double a = lo_a_ + (1.0 - lo_a_) * i / (grid_size - 1);
        if (a == 0.0) continue;  // dedup against the outside option when lo_a = 0
        options.push_back(Contract{a, price(a)});
    }
    return FiniteMenu::from_options(std::move(options));
}

}  // namespace menumech
