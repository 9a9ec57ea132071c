#include "menumech/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "menumech/errors.hpp"
#include "menumech/mech_lp.hpp"

namespace menumech {

void DirectMechanism::validate() const {
    if (types.empty()) throw std::invalid_argument("mechanism needs at least one type");
    if (rows.size() != types.size())
        throw std::invalid_argument("one contract row required per type");
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (types[i] < 0.0 || types[i] > 1.0)
            throw std::invalid_argument("types must lie in [0, 1]");
        if (i > 0 && !(types[i] > types[i - 1]))
            throw std::invalid_argument("types must be sorted and distinct");
        if (rows[i].size() != rows.front().size())
            throw std::invalid_argument("ragged contract table");
        for (const Contract& c : rows[i]) {
            if (c.allocation < 0.0 || c.allocation > 1.0)
                throw std::invalid_argument("allocation outside [0, 1]");
            if (c.payment < 0.0) throw std::invalid_argument("negative payment");
        }
    }
}

Trajectory DirectMechanism::trajectory_for(int type_index) const {
    Trajectory traj;
    traj.contracts = rows[static_cast<std::size_t>(type_index)];
    return traj;
}

ComplianceReport check_ic_pir(const DirectMechanism& mech, const DiscountSequence& seq,
                              double tolerance) {
    mech.validate();
    const int T = seq.rounds();
    if (mech.rounds() != T) throw std::invalid_argument("mechanism horizon mismatch");

    const int k = mech.num_types();
    // Discounted prefix sums of allocation and payment per report row.
    std::vector<std::vector<double>> alloc_pre(static_cast<std::size_t>(k)),
        pay_pre(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        alloc_pre[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(T) + 1, 0.0);
        pay_pre[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(T) + 1, 0.0);
        for (int t = 0; t < T; ++t) {
            const Contract& c = mech.at(j, t);
            alloc_pre[static_cast<std::size_t>(j)][static_cast<std::size_t>(t) + 1] =
                alloc_pre[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] +
                seq.weight(t) * c.allocation;
            pay_pre[static_cast<std::size_t>(j)][static_cast<std::size_t>(t) + 1] =
                pay_pre[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] +
                seq.weight(t) * c.payment;
        }
    }
    auto prefix_u = [&](int report, double v, int upto) {
        return v * alloc_pre[static_cast<std::size_t>(report)][static_cast<std::size_t>(upto)] -
               pay_pre[static_cast<std::size_t>(report)][static_cast<std::size_t>(upto)];
    };

    ComplianceReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    auto record = [&](int i, int j, int upto, double slack) {
        SlackEntry e{i, j, upto, slack};
        rep.slacks.push_back(e);
        rep.min_slack = std::min(rep.min_slack, slack);
        if (slack < -tolerance) rep.violations.push_back(e);
    };

    for (int i = 0; i < k; ++i) {
        double v = mech.types[static_cast<std::size_t>(i)];
        double truthful = prefix_u(i, v, T);
        record(i, i, 0, truthful);  // quit before round 1
        for (int j = 0; j < k; ++j)
            for (int upto = 1; upto <= T; ++upto)
                record(i, j, upto, truthful - prefix_u(j, v, upto));
    }
    return rep;
}

double revenue_per_type(const DirectMechanism& mech, int type_index) {
    if (type_index < 0 || type_index >= mech.num_types())
        throw std::out_of_range("type index out of range");
    double r = 0.0;
    for (const Contract& c : mech.rows[static_cast<std::size_t>(type_index)]) r += c.payment;
    return r;
}

std::vector<std::pair<double, double>> audit_payment_bound(const DirectMechanism& mech,
                                                           const DiscountSequence& seq) {
    mech.validate();
    if (mech.rounds() != seq.rounds()) throw std::invalid_argument("mechanism horizon mismatch");
    std::vector<std::pair<double, double>> out;
    out.reserve(mech.types.size());
    for (int i = 0; i < mech.num_types(); ++i) {
        double v = mech.types[static_cast<std::size_t>(i)];
        double slack = 0.0;
        for (const Contract& c : mech.rows[static_cast<std::size_t>(i)])
            slack += c.allocation * v - c.payment;
        out.emplace_back(v, slack);
    }
    return out;
}

DirectMechanism random_compliant_mechanism(const std::vector<double>& types,
                                           const DiscountSequence& seq, unsigned seed) {
    if (types.empty()) throw std::invalid_argument("need at least one type");

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int attempt = 0; attempt < 5; ++attempt) {
        LinearProgram lp;
        MechVars layout;
        layout.num_types = static_cast<int>(types.size());
        layout.rounds = seq.rounds();
        lp.num_vars = layout.count();
        lp.objective.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
        // Random maximization direction; payments are bounded through the
        // participation chain, so the LP stays bounded.
        for (double& c : lp.objective) c = -unit(rng);
        add_ic_pir_constraints(lp, types, seq);

        LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal) continue;
        DirectMechanism mech = mechanism_from_solution(layout, types, sol.x);
        if (check_ic_pir(mech, seq).compliant()) return mech;
    }
    throw std::runtime_error("failed to generate a compliant mechanism");
}

}  // namespace menumech
