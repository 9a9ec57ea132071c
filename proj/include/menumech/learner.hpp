#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "menumech/buyer.hpp"
#include "menumech/core.hpp"
#include "menumech/menus.hpp"

namespace menumech {

struct PhaseParams {
    double delta{0.0};
    double epsilon{0.0};
    int delay{1};
};

// epsilon = delta^2/32; delay = max(1, ceil(t_gamma * ln(t_gamma/epsilon))).
PhaseParams compute_phase_params(double delta, double t_gamma);

// Intersects [slope(chosen_a) - sqrt(2 eps), slope(chosen_a) + sqrt(2 eps)]
// with [lo, hi]. Throws inconsistent_buyer_error on an empty intersection.
std::pair<double, double> refine_interval(double lo, double hi, const QuadraticMenu& menu,
                                          double chosen_a, double epsilon);

struct PhaseRecord {
    double lo_v{0.0}, hi_v{1.0};
    PhaseParams params;
    std::optional<QuadraticMenu> menu;  // nullopt: fixed-price endgame
    double first_choice_a{0.0};         // -1 means the buyer quit
    int first_round{0};                 // 0-based
    int rounds_used{0};
};

struct RunTranscript {
    std::vector<PhaseRecord> phases;
    Trajectory trajectory;
    OutcomeSummary summary;
    std::vector<double> instant_regret;  // v - payment, per round

    // Sum over phases of 2 * delta_e * rounds_e; certifies the run's regret.
    double phase_regret_bound() const;
};

// Candidate intervals narrower than this post a fixed price at the lower
// endpoint instead of a quadratic menu.
inline constexpr double kDegenerateWidth = 1e-9;

// The phase-based menu-posting mechanism: post a quadratic menu for `delay`
// rounds, refine the candidate interval from the first-round choice, repeat
// until the horizon is consumed. Buyer must be myopic or phase_dp.
RunTranscript run_menu_pricing(const DiscountSequence& seq, const BuyerStrategy& buyer, double v);

// Buyer's optimal play against the mechanism above, restricted to a
// grid_size grid for each phase's first-round choice (later rounds of a
// phase are myopic, which is exact).
BestResponse phase_dp_response(const DiscountSequence& seq, double v, int grid_size);

// Checks the transcript-level guarantees (no dropout, true type inside every
// interval, per-round regret <= 2 delta, geometric interval shrinkage).
// Returns human-readable descriptions of any breaches.
std::vector<std::string> verify_transcript(const RunTranscript& transcript, double v);

}  // namespace menumech
