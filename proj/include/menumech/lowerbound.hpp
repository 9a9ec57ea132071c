#pragma once

#include "menumech/core.hpp"
#include "menumech/direct.hpp"

namespace menumech {

struct TwoTypeInstance {
    double v_lo{0.0};
    double v_hi{1.0};
    DiscountSequence seq;
};

// t_gamma * v_lo * (v_hi - v_lo) / v_hi.
double closed_form_regret_bound(double v_lo, double v_hi, double t_gamma);

struct TwoTypeOptimum {
    double regret{0.0};
    DirectMechanism mechanism;  // LP witness; passes check_ic_pir
};

// Minimizes the worst-case (over the two types) undiscounted regret over all
// truthful, participation-respecting commitment tables.
TwoTypeOptimum optimal_two_type_regret(const TwoTypeInstance& inst);

}  // namespace menumech
