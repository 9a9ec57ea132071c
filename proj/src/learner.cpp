#include "menumech/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>

#include "menumech/errors.hpp"

namespace menumech {

PhaseParams compute_phase_params(double delta, double t_gamma) {
    if (!(delta > 0.0) || delta > 1.0) throw std::domain_error("delta must be in (0, 1]");
    if (!(t_gamma > 0.0)) throw std::domain_error("t_gamma must be positive");
    PhaseParams p;
    p.delta = delta;
    p.epsilon = delta * delta / 32.0;
    double d = std::ceil(t_gamma * std::log(t_gamma / p.epsilon));
    p.delay = static_cast<int>(std::clamp(d, 1.0, 1e9));
    return p;
}

std::pair<double, double> refine_interval(double lo, double hi, const QuadraticMenu& menu,
                                          double chosen_a, double epsilon) {
    double center = menu.slope(chosen_a);
    double half = std::sqrt(2.0 * epsilon);
    double new_lo = std::max(lo, center - half);
    double new_hi = std::min(hi, center + half);
    if (new_lo > new_hi)
        throw inconsistent_buyer_error("choice is incompatible with the candidate interval");
    return {new_lo, new_hi};
}

double RunTranscript::phase_regret_bound() const {
    double b = 0.0;
    for (const PhaseRecord& ph : phases) b += 2.0 * ph.params.delta * ph.rounds_used;
    return b;
}

namespace {

// --------------------------------------------------------------------------
// Strategic search against the phase mechanism.
//
// Only the first round of a phase influences future menus, so the buyer's
// problem is a sequential choice over phase-start states (round, interval).
// Later rounds of a phase are played myopically, which is exact. The search
// is exhaustive over a grid of first-round choices, pruned: a branch is
// dropped when its immediate value plus an upper bound on any future surplus
// cannot reach the incumbent. The bound uses the fact that the candidate
// interval's lower end never decreases, which caps every future round's
// utility at (v - lo) + (v - lo)^2 / 2.
//
// All comparison tolerances are scaled by the current round's weight. With
// fast discounting the absolute values shrink geometrically and fixed
// epsilons would turn materially different continuations into spurious ties.
// --------------------------------------------------------------------------
class PhaseSearch {
public:
    PhaseSearch(const DiscountSequence& seq, double v, int grid_size)
        : seq_(seq), v_(v), grid_(grid_size) {
        if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
    }

    struct Decision {
        double value{0.0};
        double action{-1.0};  // chosen allocation; -1 means quit
    };

    Decision decide(int t, double lo, double hi) { return value(t, lo, hi); }

private:
    static constexpr double kMassFloor = 1e-300;  // underflow guard only
    static constexpr std::int64_t kNodeBudget = 20'000'000;

    const DiscountSequence& seq_;
    double v_;
    int grid_;
    std::int64_t nodes_{0};
    std::map<std::tuple<int, std::int64_t, std::int64_t>, Decision> memo_;

    static std::int64_t quantize(double x) { return std::llround(x * 1e12); }

    double future_cap(int t, double lo) const {
        double d = v_ - lo;
        if (d <= 0.0) return 0.0;
        return seq_.suffix_total(t) * (d + d * d / 2.0);
    }

    // v*a - p(a) evaluated as u(vertex) - (a - vertex)^2 / 2. The identity is
    // exact for the quadratic, and computing the gap term directly keeps the
    // differences between nearby choices at full relative precision; the
    // naive form cancels two O(1) terms and its noise floor swamps the
    // epsilon-scale gaps of late phases.
    static double menu_utility(const QuadraticMenu& menu, double v, double a) {
        double vertex = v - menu.c1();
        double u_vertex =
            v * vertex - (vertex * vertex / 2.0 + menu.c1() * vertex + menu.c2());
        double d = a - vertex;
        return u_vertex - d * d / 2.0;
    }

    static double menu_max_utility(const QuadraticMenu& menu, double v) {
        return menu_utility(menu, v, menu.myopic_best_response(v));
    }

    // Utility of playing myopically from a phase-start state onward.
    double myopic_value(int t, double lo, double hi) const {
        double u = 0.0;
        while (t < seq_.rounds()) {
            if (v_ < lo) break;  // nothing left to gain, quit
            if (hi - lo < kDegenerateWidth) {
                u += seq_.suffix_total(t) * std::max(v_ - lo, 0.0);
                break;
            }
            QuadraticMenu menu(lo, hi);
            PhaseParams pp = compute_phase_params(hi - lo, seq_.total());
            int rounds = std::min(pp.delay, seq_.rounds() - t);
            double a = menu.myopic_best_response(v_);
            u += (seq_.suffix_total(t) - seq_.suffix_total(t + rounds)) *
                 menu_utility(menu, v_, a);
            std::tie(lo, hi) = refine_interval(lo, hi, menu, a, pp.epsilon);
            t += rounds;
        }
        return u;
    }

    Decision value(int t, double lo, double hi) {
        if (t >= seq_.rounds()) return {0.0, -1.0};
        auto key = std::make_tuple(t, quantize(lo), quantize(hi));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Decision d = compute(t, lo, hi);
        memo_.emplace(key, d);
        return d;
    }

    Decision compute(int t, double lo, double hi) {
        if (++nodes_ > kNodeBudget)
            throw capacity_error("strategic search exceeded its node budget");

        // Once the interval sits above the type, every remaining contract
        // has negative utility; quitting is optimal.
        if (v_ < lo - 1e-15) return {0.0, -1.0};

        if (hi - lo < kDegenerateWidth) {
            // Fixed price lo, allocation 1, until the horizon.
            if (v_ >= lo) return {seq_.suffix_total(t) * (v_ - lo), 1.0};
            return {0.0, -1.0};
        }

        QuadraticMenu menu(lo, hi);
        PhaseParams pp = compute_phase_params(hi - lo, seq_.total());
        int rounds = std::min(pp.delay, seq_.rounds() - t);
        double u_myopic = menu_max_utility(menu, v_);

        if (seq_.suffix_total(t) < kMassFloor) {
            double a = nearest_grid_point(menu, menu.myopic_best_response(v_));
            return {myopic_value(t, lo, hi), a};
        }

        // Utility of rounds 2..D of the phase; identical for every first-round
        // choice since the menu is held fixed.
        double rest_mass = seq_.suffix_total(t + 1) - seq_.suffix_total(t + rounds);
        double base = rest_mass * u_myopic;
        int next_t = t + rounds;

        struct Candidate {
            double a;
            double immediate;  // gamma_t * u(a) + base
            double next_lo, next_hi;
            bool halts;  // refinement is empty: mechanism stops after phase
        };
        std::vector<Candidate> cands;
        cands.reserve(static_cast<std::size_t>(grid_));
        double lo_a = menu.lo_allocation();
        double half = std::sqrt(2.0 * pp.epsilon);
        for (int i = 0; i < grid_; ++i) {
            double a = lo_a + (1.0 - lo_a) * i / (grid_ - 1);
            Candidate c;
            c.a = a;
            c.immediate = seq_.weight(t) * menu_utility(menu, v_, a) + base;
            double center = menu.slope(a);
            c.next_lo = std::max(lo, center - half);
            c.next_hi = std::min(hi, center + half);
            c.halts = c.next_lo > c.next_hi;
            cands.push_back(c);
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
            return x.immediate > y.immediate;
        });

        // Tolerance well below the epsilon scale of this phase, so tie-break
        // and truncation can never push the choice out of epsilon-myopia.
        const double tie = std::min(1e-12, pp.epsilon / 1024.0) * seq_.weight(t);
        Decision best{0.0, -1.0};  // quitting is always available
        for (const Candidate& c : cands) {
            double cap = c.halts ? 0.0 : future_cap(next_t, c.next_lo);
            double ub = c.immediate + cap;
            if (ub < best.value - tie) continue;
            double total = c.immediate;
            if (!c.halts && next_t < seq_.rounds()) {
                // Once every possible future surplus is negligible against the
                // current round's weight, a myopic continuation is within the
                // tie tolerance of optimal; recursing further cannot change
                // the decision. This caps the lookahead at a few phases under
                // geometric discounting.
                if (cap <= tie)
                    total += myopic_value(next_t, c.next_lo, c.next_hi);
                else
                    total += value(next_t, c.next_lo, c.next_hi).value;
            }
            if (total > best.value + tie || (total >= best.value - tie && c.a > best.action)) {
                if (total > best.value) best.value = total;
                best.action = c.a;
            }
        }
        return best;
    }

    double nearest_grid_point(const QuadraticMenu& menu, double target) const {
        double lo_a = menu.lo_allocation();
        double step = (1.0 - lo_a) / (grid_ - 1);
        if (step <= 0.0) return lo_a;
        double i = std::clamp(std::round((target - lo_a) / step), 0.0, double(grid_ - 1));
        return lo_a + step * i;
    }
};

}  // namespace

RunTranscript run_menu_pricing(const DiscountSequence& seq, const BuyerStrategy& buyer, double v) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("type must lie in [0, 1]");
    if (buyer.kind == BuyerStrategy::Kind::tree_optimal)
        throw std::invalid_argument("tree_optimal buyer requires an explicit tree");

    const int T = seq.rounds();
    RunTranscript out;
    out.trajectory.contracts.assign(static_cast<std::size_t>(T), Contract{});

    std::optional<PhaseSearch> search;
    if (buyer.kind == BuyerStrategy::Kind::phase_dp)
        search.emplace(seq, v, buyer.grid_size);

    double lo = 0.0, hi = 1.0;
    int t = 0;
    while (t < T) {
        double delta = hi - lo;
        if (delta < kDegenerateWidth) {
            // Fixed-price endgame at the (collapsed) lower endpoint.
            PhaseRecord rec;
            rec.lo_v = lo;
            rec.hi_v = hi;
            rec.params = PhaseParams{delta, 0.0, T - t};
            rec.first_round = t;
            rec.rounds_used = T - t;
            bool accept = v >= lo;
            rec.first_choice_a = accept ? 1.0 : -1.0;
            for (int tau = t; tau < T; ++tau)
                out.trajectory.contracts[static_cast<std::size_t>(tau)] =
                    accept ? Contract{1.0, lo} : Contract{};
            if (!accept) out.trajectory.dropout_round = t;
            out.phases.push_back(rec);
            t = T;
            break;
        }

        QuadraticMenu menu(lo, hi);
        PhaseParams pp = compute_phase_params(delta, seq.total());
        int rounds = std::min(pp.delay, T - t);

        double first_a;
        if (buyer.kind == BuyerStrategy::Kind::myopic) {
            first_a = menu.myopic_best_response(v);
        } else {
            first_a = search->decide(t, lo, hi).action;
        }

        PhaseRecord rec;
        rec.lo_v = lo;
        rec.hi_v = hi;
        rec.params = pp;
        rec.menu = menu;
        rec.first_round = t;
        rec.rounds_used = rounds;
        rec.first_choice_a = first_a;

        if (first_a < 0.0) {
            out.trajectory.dropout_round = t;
            out.phases.push_back(rec);
            t = T;
            break;
        }

        double a_rest = menu.myopic_best_response(v);
        for (int tau = t; tau < t + rounds; ++tau) {
            double a = (tau == t) ? first_a : a_rest;
            out.trajectory.contracts[static_cast<std::size_t>(tau)] = Contract{a, menu.price(a)};
        }
        out.phases.push_back(rec);

        std::tie(lo, hi) = refine_interval(lo, hi, menu, first_a, pp.epsilon);
        t += rounds;
    }

    out.instant_regret.reserve(static_cast<std::size_t>(T));
    for (const Contract& c : out.trajectory.contracts) out.instant_regret.push_back(v - c.payment);
    out.summary = summarize(v, out.trajectory, seq);
    return out;
}

BestResponse phase_dp_response(const DiscountSequence& seq, double v, int grid_size) {
    RunTranscript tr = run_menu_pricing(seq, BuyerStrategy::phase_dp(grid_size), v);
    return BestResponse{std::move(tr.trajectory), tr.summary.buyer_utility};
}

std::vector<std::string> verify_transcript(const RunTranscript& transcript, double v) {
    std::vector<std::string> issues;
    auto complain = [&issues](const std::string& s) { issues.push_back(s); };

    if (transcript.trajectory.dropout_round.has_value())
        complain("buyer dropped out at round " +
                 std::to_string(*transcript.trajectory.dropout_round));

    for (std::size_t e = 0; e < transcript.phases.size(); ++e) {
        const PhaseRecord& ph = transcript.phases[e];
        if (v < ph.lo_v - 1e-9 || v > ph.hi_v + 1e-9) {
            std::ostringstream os;
            os << "type " << v << " outside interval [" << ph.lo_v << ", " << ph.hi_v
               << "] of phase " << e;
            complain(os.str());
        }
        for (int tau = ph.first_round; tau < ph.first_round + ph.rounds_used; ++tau) {
            double ir = transcript.instant_regret[static_cast<std::size_t>(tau)];
            if (ir > 2.0 * ph.params.delta + 1e-9) {
                std::ostringstream os;
                os << "round " << tau << " regret " << ir << " exceeds 2*delta = "
                   << 2.0 * ph.params.delta;
                complain(os.str());
            }
        }
        if (e + 1 < transcript.phases.size() && ph.params.delta >= 2.0 * kDegenerateWidth) {
            double next = transcript.phases[e + 1].params.delta;
            if (next > ph.params.delta / 2.0 + 1e-12) {
                std::ostringstream os;
                os << "phase " << e + 1 << " width " << next << " shrank by less than half of "
                   << ph.params.delta;
                complain(os.str());
            }
        }
    }
    return issues;
}

}  // namespace menumech
