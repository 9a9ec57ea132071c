#include "menumech/lowerbound.hpp"

#include <stdexcept>

#include "menumech/errors.hpp"
#include "menumech/mech_lp.hpp"

namespace menumech {

double closed_form_regret_bound(double v_lo, double v_hi, double t_gamma) {
    if (!(v_lo > 0.0) || !(v_lo < v_hi) || v_hi > 1.0)
        throw std::domain_error("need 0 < v_lo < v_hi <= 1");
    return t_gamma * v_lo * (v_hi - v_lo) / v_hi;
}

TwoTypeOptimum optimal_two_type_regret(const TwoTypeInstance& inst) {
    if (!(inst.v_lo > 0.0) || !(inst.v_lo < inst.v_hi) || inst.v_hi > 1.0)
        throw std::domain_error("need 0 < v_lo < v_hi <= 1");

    const std::vector<double> types{inst.v_lo, inst.v_hi};
    const int T = inst.seq.rounds();

    LinearProgram lp;
    MechVars layout;
    layout.num_types = 2;
    layout.rounds = T;
    const int regret_var = layout.count();
    lp.num_vars = regret_var + 1;
    lp.objective.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
    lp.objective[static_cast<std::size_t>(regret_var)] = 1.0;

    add_ic_pir_constraints(lp, types, inst.seq);

    // Regret envelope: R >= T*v - sum_t pay(v) for each type.
    for (int i = 0; i < 2; ++i) {
        std::vector<double> row(static_cast<std::size_t>(lp.num_vars), 0.0);
        row[static_cast<std::size_t>(regret_var)] = 1.0;
        for (int t = 0; t < T; ++t) row[static_cast<std::size_t>(layout.pay(i, t))] = 1.0;
        lp.add_row(std::move(row), Relation::ge, T * types[static_cast<std::size_t>(i)]);
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw lp_failure("two-type regret LP did not solve");

    TwoTypeOptimum out;
    out.regret = sol.value;
    out.mechanism = mechanism_from_solution(layout, types, sol.x);
    return out;
}

}  // namespace menumech
