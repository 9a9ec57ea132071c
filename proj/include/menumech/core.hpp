#pragma once

#include <optional>
#include <vector>

namespace menumech {

// Nonincreasing positive per-round weights on the buyer's utility.
// The seller is undiscounted throughout.
class DiscountSequence {
public:
    explicit DiscountSequence(std::vector<double> gamma);

    static DiscountSequence geometric(double ratio, int rounds);
    static DiscountSequence constant(double weight, int rounds);

    int rounds() const { return static_cast<int>(gamma_.size()); }
    // 0-based round index.
    double weight(int t) const { return gamma_[static_cast<std::size_t>(t)]; }
    const std::vector<double>& weights() const { return gamma_; }

    // Sum of all weights (the buyer's effective horizon).
    double total() const { return suffix_[0]; }
    // Sum of weights for rounds t..T-1.
    double suffix_total(int t) const { return suffix_[static_cast<std::size_t>(t)]; }

private:
    std::vector<double> gamma_;
    std::vector<double> suffix_;  // suffix_[t] = sum_{tau >= t} gamma_[tau], size T+1
};

struct Contract {
    double allocation{0.0};  // probability in [0,1]
    double payment{0.0};     // charged ex-ante, not scaled by allocation

    bool is_outside_option() const { return allocation == 0.0 && payment == 0.0; }
};

// Fixed-length interaction record. A buyer who quits at round s is recorded
// as trailing outside-option contracts from s on.
struct Trajectory {
    std::vector<Contract> contracts;
    std::optional<int> dropout_round;  // 0-based; set only for an absorbing quit
};

struct OutcomeSummary {
    double revenue{0.0};        // undiscounted sum of payments
    double buyer_utility{0.0};  // discounted
    double regret{0.0};         // rounds * v - revenue
};

double discounted_horizon(const DiscountSequence& seq);

// Discounted utility of a type-v buyer over rounds 0..upto-1 of the
// trajectory. upto in [0, T]; payments enter unscaled by allocation.
double prefix_utility(double v, const Trajectory& traj, const DiscountSequence& seq, int upto);

double revenue(const Trajectory& traj);

double regret(double v, const Trajectory& traj, int rounds);

OutcomeSummary summarize(double v, const Trajectory& traj, const DiscountSequence& seq);

}  // namespace menumech
