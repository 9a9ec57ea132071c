#include "menumech/core.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace menumech {

namespace {

std::vector<double> suffix_sums(const std::vector<double>& gamma) {
    std::vector<double> s(gamma.size() + 1, 0.0);
    for (int t = static_cast<int>(gamma.size()) - 1; t >= 0; --t) {
        s[static_cast<std::size_t>(t)] =
            s[static_cast<std::size_t>(t) + 1] + gamma[static_cast<std::size_t>(t)];
    }
    return s;
}

}  // namespace

DiscountSequence::DiscountSequence(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.empty()) throw std::invalid_argument("discount sequence must be nonempty");
    for (std::size_t t = 0; t < gamma_.size(); ++t) {
        if (!(gamma_[t] > 0.0) || !std::isfinite(gamma_[t]))
            throw std::invalid_argument("discount weights must be strictly positive");
        if (t > 0 && gamma_[t] > gamma_[t - 1])
            throw std::invalid_argument("discount weights must be nonincreasing");
    }
    suffix_ = suffix_sums(gamma_);
}

DiscountSequence DiscountSequence::geometric(double ratio, int rounds) {
    if (!(ratio > 0.0) || ratio > 1.0)
        throw std::invalid_argument("geometric ratio must be in (0, 1]");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(rounds));
    double w = 1.0;
    for (int t = 0; t < rounds; ++t) {
        w *= ratio;
        // Long horizons underflow; clamp to keep every weight positive.
        g[static_cast<std::size_t>(t)] = std::max(w, DBL_MIN);
    }
    return DiscountSequence(std::move(g));
}

DiscountSequence DiscountSequence::constant(double weight, int rounds) {
    if (!(weight > 0.0)) throw std::invalid_argument("weight must be positive");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    return DiscountSequence(std::vector<double>(static_cast<std::size_t>(rounds), weight));
}

double discounted_horizon(const DiscountSequence& seq) { return seq.total(); }

double prefix_utility(double v, const Trajectory& traj, const DiscountSequence& seq, int upto) {
    const int T = seq.rounds();
    if (static_cast<int>(traj.contracts.size()) != T)
        throw std::invalid_argument("trajectory length must match discount sequence");
    if (upto < 0 || upto > T) throw std::out_of_range("prefix round out of range");
    double u = 0.0;
    for (int t = 0; t < upto; ++t) {
        const Contract& c = traj.contracts[static_cast<std::size_t>(t)];
        u += seq.weight(t) * (c.allocation * v - c.payment);
    }
    return u;
}

double revenue(const Trajectory& traj) {
    double r = 0.0;
    for (const Contract& c : traj.contracts) r += c.payment;
    return r;
}

double regret(double v, const Trajectory& traj, int rounds) {
    return rounds * v - revenue(traj);
}

OutcomeSummary summarize(double v, const Trajectory& traj, const DiscountSequence& seq) {
    OutcomeSummary out;
    out.revenue = revenue(traj);
    out.buyer_utility = prefix_utility(v, traj, seq, seq.rounds());
    out.regret = seq.rounds() * v - out.revenue;
    return out;
}

}  // namespace menumech
