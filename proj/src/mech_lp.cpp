#include "menumech/mech_lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace menumech {

MechVars add_ic_pir_constraints(LinearProgram& lp, const std::vector<double>& types,
                                const DiscountSequence& seq) {
    MechVars vars;
    vars.num_types = static_cast<int>(types.size());
    vars.rounds = seq.rounds();
    if (lp.num_vars < vars.count())
        throw std::invalid_argument("LP has fewer variables than the mechanism layout");

    const int T = vars.rounds;
    auto zero_row = [&lp]() { return std::vector<double>(static_cast<std::size_t>(lp.num_vars), 0.0); };

    for (int i = 0; i < vars.num_types; ++i) {
        double v = types[static_cast<std::size_t>(i)];

        // Participation: every truthful suffix is worth at least quitting.
        for (int s = 0; s < T; ++s) {
            auto row = zero_row();
            for (int t = s; t < T; ++t) {
                row[static_cast<std::size_t>(vars.alloc(i, t))] = seq.weight(t) * v;
                row[static_cast<std::size_t>(vars.pay(i, t))] = -seq.weight(t);
            }
            lp.add_row(std::move(row), Relation::ge, 0.0);
        }

        // Truth-telling against every misreport-and-quit deviation.
        for (int j = 0; j < vars.num_types; ++j) {
            if (j == i) continue;
            for (int upto = 1; upto <= T; ++upto) {
                auto row = zero_row();
                for (int t = 0; t < T; ++t) {
                    row[static_cast<std::size_t>(vars.alloc(i, t))] += seq.weight(t) * v;
                    row[static_cast<std::size_t>(vars.pay(i, t))] -= seq.weight(t);
                }
                for (int t = 0; t < upto; ++t) {
                    row[static_cast<std::size_t>(vars.alloc(j, t))] -= seq.weight(t) * v;
                    row[static_cast<std::size_t>(vars.pay(j, t))] += seq.weight(t);
                }
                lp.add_row(std::move(row), Relation::ge, 0.0);
            }
        }

        // Allocations are probabilities.
        for (int t = 0; t < T; ++t) {
            auto row = zero_row();
            row[static_cast<std::size_t>(vars.alloc(i, t))] = 1.0;
            lp.add_row(std::move(row), Relation::le, 1.0);
        }
    }
    return vars;
}

DirectMechanism mechanism_from_solution(const MechVars& vars, const std::vector<double>& types,
                                        const std::vector<double>& x) {
    DirectMechanism mech;
    mech.types = types;
    mech.rows.assign(static_cast<std::size_t>(vars.num_types),
                     std::vector<Contract>(static_cast<std::size_t>(vars.rounds)));
    for (int i = 0; i < vars.num_types; ++i) {
        for (int t = 0; t < vars.rounds; ++t) {
            double a = std::clamp(x[static_cast<std::size_t>(vars.alloc(i, t))], 0.0, 1.0);
            double p = std::max(x[static_cast<std::size_t>(vars.pay(i, t))], 0.0);
            mech.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = Contract{a, p};
        }
    }
    return mech;
}

}  // namespace menumech
